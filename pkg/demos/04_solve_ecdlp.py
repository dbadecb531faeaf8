"""End to end: find m with m P = Q from a zero minor, and check it against BSGS.

A zero minor of A extends to l zeros in a kernel vector v. The support
points of v lie on one curve, so their multipliers satisfy
sum n_i - m sum n_j = 0 mod p, which is solved for m.
"""

from zerominor import harness, search
from zerominor import kernelgen as kg

cfg = harness.parse_config("""
field_degree = 19
nprime_multiplier = 1
strategy = apm
deviations = 2,3
max_kernels = 50
master_seed = 4
""")
ctx, secret = harness.setup_challenge(cfg)
print(f"{ctx.curve}, subgroup order p = {ctx.p}")

# One kernel by hand.
inst = kg.build_instance(ctx, cfg.nprime(19), rng_seed=8)
hit = search.apm_search(inst.F, inst.A, cfg.schedule).found
rec = harness.recover_secret_detailed(inst, hit)
print(f"zero minor rows {hit.alpha} cols {hit.beta}")
print(f"kernel vector has {rec.zeros} zeros (l = {inst.l}); support: {rec.support_p} P-points, "
      f"{rec.support_q} Q-points; recovered m = {rec.m}")

# The Las Vegas loop with verification, and the independent oracle.
res = harness.solve_dlp(ctx, cfg)
print(f"solve_dlp: m = {res.m} after {res.kernels_used} kernel(s), verified {res.verified}")
print(f"baby-step giant-step: {harness.bsgs_oracle(ctx)}")
