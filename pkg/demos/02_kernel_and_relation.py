"""Points on a degree-n' curve, the monomial matrix M and its left kernel.

d = 3n' points sum to O exactly when some degree-n' curve passes through
all of them, which shows up as a nonzero left kernel of M. With 2l points
the kernel has dimension l and reduces to [A | reverse identity].
"""

import numpy as np

from zerominor import harness, linalg
from zerominor import kernelgen as kg

cfg = harness.AttackConfig(field_degrees=(11,), nprime_multiplier=1, master_seed=2)
ctx, secret = harness.setup_challenge(cfg)
E, F, p = ctx.curve, ctx.curve.F, ctx.p
rng = np.random.default_rng(0)

nprime = 4
d = 3 * nprime
basis = kg.enumerate_monomials(nprime)
print(f"degree {nprime}: {len(basis)} monomials, first few {basis.monomials[:4]}")

# d multipliers of P summing to 0 mod p, so the points sum to O.
n = [int(v) for v in rng.integers(1, p, size=d - 1)]
n.append(-sum(n) % p)
on_curve = [E.mul(k, ctx.P) for k in n]
off = [E.mul(k, ctx.P) for k in rng.integers(1, p, size=d)]
for label, pts in (("sum = O", on_curve), ("random", off)):
    K = linalg.left_kernel(F, kg.build_M(F, pts, basis))
    print(f"{label:8s}: left kernel dimension {K.shape[0]}")

# The attack instance: l - 1 multiples of P and l + 1 multiples of -Q.
inst = kg.build_instance(ctx, nprime, rng_seed=5)
print(f"\ninstance: M is {inst.M.shape}, kernel is {inst.K.shape}, rank {linalg.rank(F, inst.K)}")
print("K M == 0:", not linalg.matmul(F, inst.K, inst.M).any())
print("right block is the reverse identity:", np.array_equal(inst.K[:, inst.l:], linalg.reverse_identity(inst.l)))
print("dense part A, top-left corner:")
print(inst.A[:4, :4])
