"""The three zero-minor searches on one dense part A, and the census.

GESC looks at 2-minors of one Schur complement; APM slides a 2x2
principal block along the diagonal and adds 2 or 3 deviations. Every hit
is a zero minor of A, checked here by a direct determinant.
"""

from zerominor import harness, linalg, search
from zerominor import kernelgen as kg
from zerominor.linalg import MinorIndex

cfg = harness.AttackConfig(field_degrees=(16,), nprime_multiplier=1, master_seed=3)
ctx, _ = harness.setup_challenge(cfg)
inst = kg.build_instance(ctx, 16, rng_seed=1)
F, A = inst.F, inst.A
print(f"A is {A.shape[0]}x{A.shape[1]} over GF(2^16)")

# Schur complement identity det(A) = det(E) det(S).
E = MinorIndex(range(4), range(4))
S = linalg.schur_complement(F, A, E)
lhs = linalg.determinant(F, A)
rhs = F.mul(linalg.minor(F, A, E), linalg.determinant(F, S))
print(f"det(A) = {lhs:#x}, det(E) det(S) = {rhs:#x}")

for name, out in (("all 2-minors", search.all_two_minor_search(F, A)),
                  ("GESC, block 2", search.gesc_search(F, A, 2)),
                  ("APM [2, 3]", search.apm_search(F, A, search.ApmSchedule(2, (2, 3))))):
    if out.found is None:
        print(f"{name:14s}: nothing after {out.minors_tested} minors")
        continue
    det = linalg.minor(F, A, out.found)
    print(f"{name:14s}: rows {out.found.alpha} cols {out.found.beta} "
          f"after {out.minors_tested} minors, determinant {det}")

# Count every zero APM in a window of principal positions.
census = search.zero_minor_census(F, A, search.ApmSchedule(2, (2, 3), (1, 10)))
for n, s in census.summary().items():
    print(f"deviation {n}: {s['total']} zero minors over 10 positions (mean {s['mean']:.1f}, std {s['std']:.1f})")
