import numpy as np
import pytest

import oracles
from zerominor import harness, linalg
from zerominor import kernelgen as kg


@pytest.fixture(scope="module")
def ctx13():
    ctx, _ = harness.setup_challenge(harness.AttackConfig(field_degrees=(13,), master_seed=11))
    return ctx


def test_monomials_order_and_count():
    b = kg.enumerate_monomials(2)
    assert b.monomials == ((2, 0, 0), (1, 1, 0), (1, 0, 1), (0, 2, 0), (0, 1, 1), (0, 0, 2))
    assert len(kg.enumerate_monomials(13)) == 105
    with pytest.raises(ValueError):
        kg.enumerate_monomials(0)


def test_build_M_matches_schoolbook(ctx13):
    F = ctx13.curve.F
    rng = np.random.default_rng(0)
    pts = [ctx13.curve.random_point(rng) for _ in range(5)]
    basis = kg.enumerate_monomials(4)
    M = kg.build_M(F, pts, basis)
    for i, P in enumerate(pts):
        for j, (a, b, _) in enumerate(basis.monomials):
            want = oracles.mul(oracles.power(P.x, a, 13, F.poly), oracles.power(P.y, b, 13, F.poly),
                               13, F.poly)
            assert M[i, j] == want
    with pytest.raises(ValueError):
        kg.build_M(F, [pts[0], kg.Point(infinity=True)], basis)


def test_derive_seed_is_stable_and_distinct():
    assert kg.derive_seed(1, 2) == kg.derive_seed(1, 2)
    assert len({kg.derive_seed(1, i) for i in range(100)}) == 100
    assert kg.derive_seed(1, 2) != kg.derive_seed(2, 1)


def test_sample_points_distinct(ctx13):
    p_m, q_m, pts = kg.sample_points(ctx13, 39, np.random.default_rng(3))
    assert len(p_m) == 38 and len(q_m) == 40
    assert len(set(pts)) == 78 and not any(P.infinity for P in pts)
    assert pts == kg.points_from_multipliers(ctx13, p_m, q_m)


@pytest.mark.parametrize("nprime", [13, 26])
def test_instance_structure(ctx13, nprime):
    inst = kg.build_instance(ctx13, nprime, 5)
    F, l = inst.F, inst.l
    assert l == inst.d == 3 * nprime
    assert inst.M.shape == (2 * l, (nprime + 1) * (nprime + 2) // 2)
    assert inst.K.shape == (l, 2 * l)
    assert np.array_equal(inst.K[:, l:], linalg.reverse_identity(l))
    assert np.array_equal(inst.A, inst.K[:, :l])
    assert not linalg.matmul(F, inst.K, inst.M).any()
    assert linalg.rank(F, inst.K) == l
    assert inst.multiplier(0) == ("P", inst.p_mults[0])
    assert inst.multiplier(l - 1) == ("Q", inst.q_mults[0])


def test_instance_deterministic(ctx13):
    a = kg.build_instance(ctx13, 13, 99)
    b = kg.build_instance(ctx13, 13, 99)
    assert np.array_equal(a.A, b.A) and a.rng_seed == b.rng_seed


def test_dump_load_roundtrip(ctx13):
    inst = kg.build_instance(ctx13, 13, 1)
    d = kg.load_instance(kg.dump_instance(inst))
    assert d["seed"] == inst.rng_seed and d["nprime"] == 13
    assert d["p_mults"] == inst.p_mults and d["q_mults"] == inst.q_mults
    for name in ("M", "K", "A"):
        assert np.array_equal(d[name], getattr(inst, name))


def test_too_small_group_rejected(ctx13):
    with pytest.raises(ValueError):
        kg.sample_points(ctx13, ctx13.p, np.random.default_rng(0))
