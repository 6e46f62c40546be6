from fractions import Fraction as F

import mpmath as mp
import pytest

from vertexlab.errors import ParamOutOfRange
from vertexlab.qkernel import (
    QParams,
    as_mp,
    make_rng,
    q_pochhammer,
    q_pochhammer_inf,
    random_rational,
)
from vertexlab import weights as W


def all_states(kmax, conservation):
    for i1 in range(kmax + 1):
        for j1 in range(kmax + 1):
            for i2 in range(kmax + 1):
                j2 = i1 + j1 - i2 if conservation == "row" else i2 + j1 - i1
                if 0 <= j2 <= kmax + 2:
                    yield (i1, j1, i2, j2)


def test_level_one_reduction_matches_table(qp):
    """The fused row weight at level 1 equals the four-state table."""
    q, s = qp
    u = F(2, 7)
    spec = W.shl(u)
    for g in range(6):
        assert W.w_fused(spec, qp, (g, 0, g, 0)) == (1 - s * u * q ** g) / (1 - s * u)
        assert W.w_fused(spec, qp, (g + 1, 0, g, 1)) == u * (1 - s * s * q ** g) / (1 - s * u)
        assert W.w_fused(spec, qp, (g, 1, g, 1)) == (u - s * q ** g) / (1 - s * u)
        assert W.w_fused(spec, qp, (g, 1, g + 1, 0)) == (1 - q ** (g + 1)) / (1 - s * u)
    # the desk number: state (1,1;1,1) at u=1/2, s=-1/2, q=1/2
    assert W.w_fused(W.shl(F(1, 2)), qp, (1, 1, 1, 1)) == F(3, 5)
    # conservation violations vanish
    assert W.w_fused(spec, qp, (1, 0, 1, 1)) == 0


def test_dual_level_one_table(qp):
    q, s = qp
    v = F(2, 7)
    spec = W.shl(v)
    for g in range(5):
        assert W.w_dual_fused(spec, qp, (g, 1, g, 1)) == (v - s * q ** g) / (1 - s * v)
        assert W.w_dual_fused(spec, qp, (g, 0, g, 0)) == (1 - s * v * q ** g) / (1 - s * v)
        assert W.w_dual_fused(spec, qp, (g + 1, 1, g, 0)) == (1 - s * s * q ** g) / (1 - s * v)
        assert W.w_dual_fused(spec, qp, (g, 0, g + 1, 1)) == v * (1 - q ** (g + 1)) / (1 - s * v)
    assert W.w_dual_fused(spec, qp, (0, 0, 1, 0)) == 0


def test_dual_conjugation_involution(qp):
    q, s = qp
    spec = W.sqw(F(3, 4))
    for st in all_states(3, "dual"):
        i1, j1, i2, j2 = st
        once = W.w_dual_fused(spec, qp, st)
        # applying the conjugation twice returns the original weight
        back = W.conj_factor(q, s, i2, i1) * once if once else once
        orig = W.w_fused(spec, qp, (i2, j1, i1, j2))
        assert W.conj_factor(q, s, i1, i2) * orig == once
        assert back == orig * W.conj_factor(q, s, i1, i2) * W.conj_factor(q, s, i2, i1)


def test_sqw_weight_matches_direct_form(qp):
    xi = F(3, 4)
    for st in all_states(4, "row"):
        assert W.w_sqw(xi, qp, st) == W.w_sqw_direct(xi, qp, st)


def test_sg_weight_matches_scaling_limit(qp):
    alpha = F(1, 3)
    with mp.workdps(80):
        eps = mp.mpf(10) ** -30
        for st in all_states(3, "row"):
            a = as_mp(W.w_sg(alpha, qp, st))
            b = W.w_fused_raw(
                -as_mp(alpha) * eps, 1 / eps, as_mp(qp.q), as_mp(qp.s), *st
            )
            assert abs(a - b) < mp.mpf(10) ** -25


def test_boundary_weights(qp):
    q, s = qp
    assert W.boundary_weight(W.sg(F(1, 2)), qp, 0) == 1
    assert W.boundary_weight(W.sg(F(1, 2)), qp, 2) == F(2, 3)  # a^2/(q;q)_2 at a=q=1/2
    assert W.boundary_weight(W.shl(F(2, 7)), qp, 1) == F(2, 7)
    assert W.boundary_weight(W.shl(F(2, 7)), qp, 2) == 0
    xi = F(3, 4)
    for k in range(5):
        want = xi ** k * q_pochhammer(-s / xi, q, k) / q_pochhammer(q, q, k)
        assert W.boundary_weight(W.sqw(xi), qp, k) == want


def test_cross_level_one_values(qp):
    q, s = qp
    u, v = F(1, 2), F(1, 2)
    f, g = W.shl(u), W.shl(v)
    assert W.cross_R(f, g, qp, (1, 1, 0, 0)) == (1 - q) / (1 - u * v)
    assert W.cross_R(f, g, qp, (1, 0, 1, 0)) == (1 - q * u * v) / (1 - u * v)
    assert W.cross_R(f, g, qp, (0, 0, 0, 0)) == 1
    assert W.cross_R(f, g, qp, (2, 0, 2, 0)) == 0  # beyond the level cap


def test_cross_symmetry_random():
    rng = make_rng(17)
    q = F(1, 2)
    for _ in range(100):
        z = random_rational(rng, F(1, 100), F(1, 4))
        qI = random_rational(rng, F(1, 100), F(3, 4))
        qJ = random_rational(rng, F(1, 100), F(3, 4))
        i1, j1, i2 = (int(rng.integers(0, 4)) for _ in range(3))
        j2 = i2 + j1 - i1
        if j2 < 0:
            continue
        assert W.cross_R_fused_raw(z, qI, qJ, q, i1, j1, i2, j2) == W.cross_R_fused_raw(
            z, qJ, qI, q, j1, i1, j2, i2
        )


def test_cross_normalization_sum():
    rng = make_rng(19)
    q = F(1, 2)
    for _ in range(50):
        z = random_rational(rng, F(1, 100), F(1, 4))
        qI = random_rational(rng, F(1, 100), F(3, 4))
        qJ = random_rational(rng, F(1, 100), F(3, 4))
        a2, a1 = int(rng.integers(0, 4)), int(rng.integers(0, 4))
        total = mp.mpf(0)
        for k2 in range(0, 140):
            k1 = a2 + k2 - a1
            if k1 < 0:
                continue
            total += as_mp(W.cross_R_fused_raw(z, qI, qJ, q, a2, a1, k1, k2))
        want = (
            q_pochhammer_inf(z * qI, q)
            * q_pochhammer_inf(z * qJ, q)
            / (q_pochhammer_inf(z, q) * q_pochhammer_inf(z * qI * qJ, q))
        )
        assert abs(total - want) < mp.mpf("1e-25")


def test_cross_sqw_sqw_direct_form(qp):
    xi, th = F(2, 3), F(3, 4)
    for st in all_states(4, "dual"):
        assert W.cross_R(W.sqw(xi), W.sqw(th), qp, st) == W.cross_R_sqw_sqw_direct(
            xi, th, qp, st
        )


def test_sg_crosses_match_scaling_limits(qp):
    q, s = qp
    with mp.workdps(80):
        eps = mp.mpf(10) ** -30
        u, qJ, alpha, beta, th = F(1, 3), F(2, 5), F(1, 5), F(1, 4), F(3, 4)
        for st in all_states(2, "dual"):
            a = as_mp(W.cross_R_sg_raw(u, qJ, beta, q, *st))
            b = W.cross_R_fused_raw(
                as_mp(u) * (-as_mp(beta) * eps), 1 / eps, as_mp(qJ), as_mp(q), *st
            )
            assert abs(a - b) < mp.mpf(10) ** -25
            a = as_mp(W.cross_R_sg_sg_raw(alpha, beta, q, *st))
            b = W.cross_R_fused_raw(
                as_mp(alpha) * as_mp(beta) * eps * eps, 1 / eps, 1 / eps, as_mp(q), *st
            )
            assert abs(a - b) < mp.mpf(10) ** -25
            a = as_mp(W.cross_R_sqw_sg_raw(alpha, th, q, s, *st))
            b = W.cross_R_fused_raw(
                (-as_mp(alpha) * eps) * as_mp(s), -as_mp(th) / as_mp(s), 1 / eps, as_mp(q), *st
            )
            assert abs(a - b) < mp.mpf(10) ** -25


def test_stochastic_six_vertex_values(qp):
    u = v = F(1, 2)
    assert W.stoch_weight("s6v", (u, v), qp, (0, 1, 1, 0)) == F(1, 7)
    assert W.stoch_weight("s6v", (u, v), qp, (0, 1, 0, 1)) == F(6, 7)
    # weights carry no dependence on the spin parameter
    qp2 = QParams(F(1, 2), F(-1, 5))
    for st in [(0, 1, 1, 0), (0, 1, 0, 1), (1, 0, 1, 0), (1, 0, 0, 1), (1, 1, 1, 1)]:
        assert W.stoch_weight("s6v", (u, v), qp, st) == W.stoch_weight(
            "s6v", (u, v), qp2, st
        )
    with pytest.raises(ParamOutOfRange):
        W.stoch_weight("s6v", (u, v), qp, (2, 0, 2, 0))


def test_row_sums(qp):
    specs = {"shl": W.shl(F(1, 3)), "sqw": W.sqw(F(3, 4)), "sg": W.sg(F(1, 3))}
    for fk, f in specs.items():
        for gk, g in specs.items():
            for (i0, i0p) in [(0, 0), (1, 0), (0, 1), (2, 1), (1, 2)]:
                if W._level_of(f, qp) is not None and i0p > 1:
                    continue
                if W._level_of(g, qp) is not None and i0 > 1:
                    continue
                row = W.u0_row(f, g, qp, i0, i0p)
                total = sum(p for _, p in row)
                if W.pi_is_rational(f, g):
                    assert total == 1, (fk, gk, i0, i0p)
                else:
                    assert abs(as_mp(total) - 1) < mp.mpf("1e-25")


def test_boundary_laws_exact(qp):
    q, s = qp
    a, b, u, v, th, xi = F(1, 4), F(1, 5), F(1, 3), F(1, 3), F(3, 4), F(2, 3)
    # bottom boundary: a Bernoulli-type law with weight (v a)^{j'}/(1 + v a)
    for i0p in (0, 1, 2):
        for j0p in (0, 1):
            got = W.u0_weight(W.sg(a), W.shl(v), qp, 0, i0p, j0p, i0p + j0p)
            assert got == (v * a) ** j0p / (1 + v * a)
    # left boundary: (u b)^{j}/(1 + u b)
    for i0 in (0, 1, 2):
        for j0 in (0, 1):
            got = W.u0_weight(W.shl(u), W.sg(b), qp, i0, 0, i0 + j0, j0)
            assert got == (u * b) ** j0 / (1 + u * b)
    # corner: the q-Poisson law of parameter a*b
    for k in range(5):
        got = as_mp(W.u0_weight(W.sg(a), W.sg(b), qp, 0, 0, k, k))
        want = as_mp((a * b) ** k / q_pochhammer(q, q, k)) * q_pochhammer_inf(a * b, q)
        assert abs(got - want) < mp.mpf("1e-40")
    # bottom boundary of the higher spin pair: q-negative-binomial weights
    for i0p in (0, 1, 2):
        for j0p in range(3):
            got = as_mp(W.u0_weight(W.sg(a), W.sqw(th), qp, 0, i0p, j0p, i0p + j0p))
            want = (
                as_mp((a * th) ** j0p * q_pochhammer(-s / th, q, j0p) / q_pochhammer(q, q, j0p))
                * q_pochhammer_inf(a * th, q)
                / q_pochhammer_inf(-s * a, q)
            )
            assert abs(got - want) < mp.mpf("1e-40")
    # left boundary of the pushing model: qNB(-s/xi, b*xi)
    for k in range(5):
        got = as_mp(W.u0_weight(W.sqw(xi), W.sg(b), qp, 0, 0, k, k))
        want = (
            as_mp((b * xi) ** k * q_pochhammer(-s / xi, q, k) / q_pochhammer(q, q, k))
            * q_pochhammer_inf(b * xi, q)
            / q_pochhammer_inf(-s * b, q)
        )
        assert abs(got - want) < mp.mpf("1e-40")


def test_phi43_weight_against_closed_form(qp):
    xi, th = F(2, 3), F(3, 4)
    for st in [(0, 0, 0, 0), (1, 2, 2, 1), (2, 1, 1, 2), (0, 3, 2, 1), (3, 0, 1, 2)]:
        got = as_mp(W.stoch_weight("phi43", (xi, th), qp, st))
        want = W.phi43_weight_direct(xi, th, qp, st)
        assert abs(got - want) < mp.mpf("1e-40")
    # the empty-cell weight equals the reciprocal normalization constant
    got = as_mp(W.stoch_weight("phi43", (xi, th), qp, (0, 0, 0, 0)))
    want = 1 / W.pi_factor(W.sqw(xi), W.sqw(th), qp)
    assert abs(got - want) < mp.mpf("1e-40")


def test_nonneg_check_families(qp):
    ok, witness = W.nonneg_check(("w", W.shl(F(1, 3))), qp, cutoff=4)
    assert ok, witness
    ok, witness = W.nonneg_check(("w*", W.sqw(F(3, 4))), qp, cutoff=4)
    assert ok, witness
    ok, witness = W.nonneg_check(("cross", W.sqw(F(3, 5)), W.sqw(F(2, 3))), qp, cutoff=4)
    assert ok, witness
    # boundary case of the sqW/sqW cross: s = -sqrt(q), xi = theta = -s
    qp2 = QParams(F(1, 4), F(-1, 2))
    ok, witness = W.nonneg_check(
        ("cross", W.sqw(F(1, 2)), W.sqw(F(1, 2))), qp2, cutoff=4
    )
    assert ok, witness
    # scaled geometric row at the box edge alpha = -1/s
    ok, witness = W.nonneg_check(("w", W.sg(F(2))), qp, cutoff=4)
    assert ok, witness
    # outside the box a witness exists: R(1,1;0,0) = (1-q)/(1-uv) < 0 at uv > 1
    ok, witness = W.nonneg_check(("cross", W.shl(F(3, 2)), W.shl(F(3, 2))), qp, cutoff=2)
    assert not ok and witness is not None
    # the row weights themselves stay positive past u = 1 (spin in (-1,0)):
    # the search must honestly report no witness there
    ok, witness = W.nonneg_check(("w", W.shl(F(3, 2))), qp, cutoff=4)
    assert ok


def test_unsupported_pair():
    import dataclasses

    with pytest.raises(Exception):
        bad = dataclasses.replace(W.shl(F(1, 2)), kind="bogus")
