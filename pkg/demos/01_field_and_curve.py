"""Binary field arithmetic and the curves the attack runs on.

Walks through GF(2^m) arithmetic, solving z^2 + z = c, point counting
and picking a prime-order subgroup with a challenge Q = m P.
"""

import numpy as np

from zerominor.curve import Curve, curve_search, enumerate_points, find_prime_subgroup, hasse_ok
from zerominor.field import gf2m

rng = np.random.default_rng(1)

# A tiny field first, small enough to check by hand: GF(8) = GF(2)[x] / (x^3 + x + 1).
F = gf2m(3, 0b1011)
print("GF(8):  (x+1)(x^2+1) =", bin(F.mul(0b011, 0b101)), "  x^-1 =", bin(F.inv(0b010)))
print("trace of 1 and x:", F.trace(1), F.trace(2))
print("roots of z^2 + z = x:", F.solve_quadratic(2))

# The same calls work up to degree 62; above 22 there are no log tables.
for m in (13, 40):
    G = gf2m(m)
    a = G.random_element(rng, nonzero=True)
    print(f"GF(2^{m}): a * a^-1 = {G.mul(a, G.inv(a))}, sqrt(a)^2 == a: {G.sqr(G.sqrt(a)) == a}")

# Point counting by brute force, then a search for a curve with a large prime subgroup.
E = Curve(gf2m(8), 0x1, 0x2b)
N, _ = enumerate_points(E)
print(f"\n{E} has {N} points, Hasse bound holds: {hasse_ok(8, N)}")

curve, N, p = curve_search(16, rng)
print(f"curve_search(16): {curve}, order {N} = {N // p} * {p}")
ctx, secret = find_prime_subgroup(curve, N, rng)
print(f"P = {ctx.P}, Q = {ctx.Q}; planted secret {secret}, check m P == Q: {curve.mul(secret, ctx.P) == ctx.Q}")

# Group law sanity: P + (-P) = O and p P = O.
print("P + (-P) =", curve.add(ctx.P, curve.neg(ctx.P)), "  p P =", curve.mul(p, ctx.P))
