import math
from fractions import Fraction as F

import mpmath as mp
import pytest

from vertexlab.errors import ParamOutOfRange, WindowTooSmall
from vertexlab.qkernel import DiscreteLaw, QParams, as_mp, make_rng
from vertexlab import vertexmodels as V
from vertexlab import weights as W


def test_s6v_single_cell_exact_law(qp):
    law, dropped = V.exact_height_dist("s6v", [F(1, 2)], [F(1, 2)], qp, "step", 1, 1)
    assert dropped == 0
    assert law == {0: F(1, 7), 1: F(6, 7)}


def test_s6v_exact_vs_monte_carlo(qp):
    rows, cols = [F(1, 2), F(1, 3)], [F(1, 2), F(1, 4)]
    law, _ = V.exact_height_dist("s6v", rows, cols, qp, "step", 2, 2)
    assert sum(law.values()) == 1
    rng = make_rng(211)
    n = 8000
    counts = {}
    cache = {}
    for _ in range(n):
        _, hg = V.sample_model("s6v", rows, cols, qp, "step", rng=rng, cache=cache)
        counts[hg[(2, 2)]] = counts.get(hg[(2, 2)], 0) + 1
    for val, p in law.items():
        pf = float(p)
        se = math.sqrt(pf * (1 - pf) / n)
        assert abs(counts.get(val, 0) / n - pf) < 4.5 * se, (val, counts.get(val), pf)


def test_hs6v_exact_vs_monte_carlo(qp):
    rows, cols = [F(1, 3), F(1, 4)], [F(3, 4), F(1, 2)]
    law, dropped = V.exact_height_dist("hs6v", rows, cols, qp, "step", 2, 2)
    assert sum(law.values()) == 1 and dropped == 0
    rng = make_rng(223)
    n = 6000
    counts = {}
    cache = {}
    for _ in range(n):
        _, hg = V.sample_model("hs6v", rows, cols, qp, "step", rng=rng, cache=cache)
        counts[hg[(2, 2)]] = counts.get(hg[(2, 2)], 0) + 1
    for val, p in law.items():
        pf = float(p)
        if pf < 0.005:
            continue
        se = math.sqrt(pf * (1 - pf) / n)
        assert abs(counts.get(val, 0) / n - pf) < 4.5 * se, (val, pf)


def test_phi43_step_empty_probability(qp):
    # under the all-zero boundary the whole window stays empty with
    # probability equal to the product of the empty-cell weights
    xi, th = F(2, 3), F(3, 4)
    law, dropped = V.exact_height_dist("phi43", [xi, xi], [th, th], qp, "step", 2, 2)
    p_each = as_mp(W.stoch_weight("phi43", (xi, th), qp, (0, 0, 0, 0)))
    # P(H = 0) >= P(grid empty) = p_each^4; equality fails only through
    # configurations with H(2,2) = 0 but activity elsewhere, which cannot
    # happen on a full window
    rng = make_rng(227)
    n = 4000
    empties = 0
    cache = {}
    for _ in range(n):
        grid, hg = V.sample_model("phi43", [xi, xi], [th, th], qp, "step", rng=rng, cache=cache)
        if all(v == 0 for v in grid.v.values()) and all(v == 0 for v in grid.h.values()):
            empties += 1
    p_empty = float(p_each ** 4)
    se = math.sqrt(p_empty * (1 - p_empty) / n)
    assert abs(empties / n - p_empty) < 4.5 * se
    assert abs(as_mp(sum(law.values())) + dropped - 1) < mp.mpf("1e-11")


def test_phi43_stationary_reduces_to_step_at_zero(qp):
    xi, th = F(2, 3), F(3, 4)
    a, _ = V.exact_height_dist("phi43", [xi], [th], qp, "step", 1, 1)
    b, _ = V.exact_height_dist(
        "phi43", [xi], [th], qp, ("stationary", F(0), F(0)), 1, 1
    )
    vals = set(a) | set(b)
    for v in vals:
        assert abs(as_mp(a.get(v, 0)) - as_mp(b.get(v, 0))) < mp.mpf("1e-18")


def test_height_gradient_reconstruction(qp):
    rng = make_rng(229)
    for model, rows, cols, boundary in [
        ("s6v", [F(1, 2), F(1, 3)], [F(1, 2), F(1, 4)], "step"),
        ("s6v", [F(1, 2)], [F(1, 2)], ("stationary", F(1, 4), F(1, 4))),
        ("hs6v", [F(1, 3), F(1, 4)], [F(3, 4)], "step"),
        ("phi43", [F(2, 3), F(3, 4)], [F(3, 4)], ("stationary", F(1, 5), F(1, 5))),
    ]:
        for _ in range(40):
            grid, hg = V.sample_model(model, rows, cols, qp, boundary, rng=rng)
            v, h = V.reconstruct_edges(hg, model, grid.X, grid.Y)
            for key, val in grid.v.items():
                assert v[key] == val, (model, "v", key)
            for key, val in grid.h.items():
                assert h[key] == val, (model, "h", key)


def test_step_height_identity(qp):
    # for step boundaries the centered height at (x, y) counts the paths
    # weakly right of (x+1, y)
    rng = make_rng(233)
    rows, cols = [F(1, 2), F(1, 3)], [F(1, 2), F(1, 3)]
    for _ in range(50):
        grid, hg = V.sample_model("s6v", rows, cols, qp, "step", rng=rng)
        for x in range(0, grid.X):
            for y in range(0, grid.Y + 1):
                # paths weakly right of (x+1, y): horizontal crossings of the
                # vertical line through x + 1/2 at heights <= y
                direct = sum(
                    grid.h[(x, yy)] if x >= 1 else grid.b_v[yy]
                    for yy in range(1, y + 1)
                )
                assert hg[(x, y)] == direct


def test_match_marginal_exact_step(qp):
    rep = V.match_marginal_exact("s6v", [F(1, 2)], [F(1, 2)], qp, "step", 1, 1)
    assert rep["pass"]
    assert rep["field_law"][1] == F(6, 7)
    rep = V.match_marginal_exact("hs6v", [F(1, 3)], [F(3, 4)], qp, "step", 1, 1)
    assert rep["pass"] and rep["worst_abs_diff"] < mp.mpf("1e-25")
    rep = V.match_marginal_exact("phi43", [F(2, 3)], [F(3, 4)], qp, "step", 1, 1, max_part=20)
    assert rep["pass"], rep["worst_abs_diff"]


def test_match_marginal_exact_stationary_s6v(qp):
    rep = V.match_marginal_exact(
        "s6v",
        [F(1, 4)],
        [F(1, 4)],
        QParams(F(1, 2), F(-1, 4)),
        ("stationary", F(1, 4), F(1, 4)),
        1,
        1,
        max_part=26,
    )
    assert rep["pass"], rep


def test_validation_errors(qp):
    with pytest.raises(ParamOutOfRange):
        V.sample_model("s6v", [F(3, 2)], [F(1)], qp, "step", seed=0)
    with pytest.raises(ParamOutOfRange):
        V.sample_model("hs6v", [F(1, 3)], [F(5)], qp, "step", seed=0)
    with pytest.raises(ParamOutOfRange):
        V.sample_model("phi43", [F(2, 3)], [F(3, 4)], QParams(F(1, 5), F(-1, 2)), "step", seed=0)


def test_pushtasep_initial_and_order(qp):
    xi, th = F(2, 3), F(3, 4)
    rng = make_rng(239)
    rows = [xi] * 4
    cols = [th] * 4
    for _ in range(40):
        grid, _ = V.sample_model("phi43", rows, cols, qp, "step", rng=rng)
        traj = V.pushtasep_view(grid, 4)
        # step boundary: particles start packed at -1, -2, -3, ...
        assert traj[0] == (-1, -2, -3, -4)
        for t in range(1, 5):
            ys = traj[t]
            assert all(ys[i] > ys[i + 1] for i in range(3))
    with pytest.raises(WindowTooSmall):
        V.pushtasep_view(grid, 6)


def test_pushtasep_first_jump_law():
    # parameters mapping onto the q-deformed pushing exclusion process: the
    # first particle's jump is q-negative-binomial with parameters (nu/mu, mu)
    q = F(1, 2)
    mu_par, nu_par = F(3, 5), F(1, 2)
    qp = QParams(q, -nu_par)
    rows = [mu_par]
    cols = [F(1)]
    boundary = ("stationary", F(0), F(1))
    law = DiscreteLaw.qnb(nu_par / mu_par, mu_par, q)
    rng = make_rng(241)
    n = 20000
    counts = {}
    cache = {}
    for _ in range(n):
        grid, _ = V.sample_model("phi43", rows, cols, qp, boundary, rng=rng, cache=cache)
        traj = V.pushtasep_view(grid, 1)
        jump = traj[0][0] - traj[1][0]
        counts[jump] = counts.get(jump, 0) + 1
    for k in range(4):
        p = float(law.pmf(k))
        se = math.sqrt(p * (1 - p) / n)
        assert abs(counts.get(k, 0) / n - p) < 4 * se, (k, counts.get(k, 0) / n, p)


def test_serialization(qp):
    grid, hg = V.sample_model("s6v", [F(1, 2)], [F(1, 2)], qp, "step", seed=3)
    csv_text = grid.to_csv()
    assert csv_text.splitlines()[0] == "edge,x,y,value"
    blob = grid.to_json()
    assert blob["model"] == "s6v"
    assert hg.to_csv().splitlines()[0] == "x,y,height"
    # determinism
    grid2, _ = V.sample_model("s6v", [F(1, 2)], [F(1, 2)], qp, "step", seed=3)
    assert grid2.to_csv() == csv_text
