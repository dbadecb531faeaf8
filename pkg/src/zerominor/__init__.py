"""Minor-based attack on the binary-field elliptic curve discrete logarithm."""

__version__ = "0.1.0"
