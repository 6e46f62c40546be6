"""Direct samplers for the three stochastic vertex models on the quadrant,
their height functions, exact transfer-matrix laws at desk scale, the
marginal-matching reports against the lattice random fields, and the pushing
particle view of the third model.

Models (cell weights are the column-0 Markov kernels from ``weights``):

* 's6v'   -- six-vertex: all occupancies in {0,1}, up-right paths,
             cell parameters (u_y, v_x);
* 'hs6v'  -- higher spin: vertical occupancies unbounded, horizontal in
             {0,1}, cell parameters (u_y, theta_x);
* 'phi43' -- pushing model: all occupancies unbounded, cell parameters
             (xi_y, theta_x); the particle view generalizes a q-deformed
             pushing exclusion process.
"""

import csv
import io
import json
import math
from fractions import Fraction

import mpmath as mp

from .errors import ParamOutOfRange, StateSpaceTooLarge, WindowTooSmall
from .qkernel import DiscreteLaw, as_mp, is_exact, make_rng
from .weights import shl, sqw, stoch_weight, _level_of

MODELS = ("s6v", "hs6v", "phi43")


def _fpoch(a, q, n):
    out = 1.0
    p = 1.0
    for _ in range(n):
        out *= 1.0 - a * p
        p *= q
    return out


def _fpoch_inf(a, q):
    out = 1.0
    t = a
    while abs(t) > 1e-19:
        out *= 1.0 - t
        t *= q
    return out


def _fcross(z, qI, qJ, q, i1, j1, i2, j2):
    """Float64 evaluation of the general cross weight (generic parameters)."""
    if min(i1, j1, i2, j2) < 0 or i2 + j1 != i1 + j2:
        return 0.0
    x = q / (z * qJ)
    den = (
        _fpoch(z, q, j1 + i2)
        * _fpoch(q, q, j2)
        * _fpoch(q, q, i2)
        * _fpoch(x, q, i1 - j1 if i1 >= j1 else 0)
    )
    if i1 < j1:
        for k in range(i1 - j1, 0):
            den /= 1.0 - x * q ** k
    pref = q ** (i2 * i1 + j2 * (j2 - 1) // 2) * (-z * qJ) ** j2 * _fpoch(q, q, j1) / den
    n = i2
    aa = (q ** (-i1) if i1 else 1.0, z * qI, x)
    bb = (1.0 / qJ, q ** (1 + j2 - i2), q ** (1 - i1 - j2) * qI)
    suffix = []
    for b in bb:
        g = [1.0] * (n + 1)
        for j in range(n - 1, -1, -1):
            g[j] = (1.0 - b * q ** j) * g[j + 1]
        suffix.append(g)
    total = 0.0
    coeff = 1.0
    a0 = a1 = a2 = 1.0
    qj = 1.0
    qmn = q ** (-n) if n else 1.0
    for j in range(n + 1):
        total += coeff * a0 * a1 * a2 * suffix[0][j] * suffix[1][j] * suffix[2][j]
        if j < n:
            coeff *= q * (1.0 - qmn * qj) / (1.0 - q * qj)
            a0 *= 1.0 - aa[0] * qj
            a1 *= 1.0 - aa[1] * qj
            a2 *= 1.0 - aa[2] * qj
            qj *= q
    return pref * total


def _phi43_law_f64(xi, th, q, s, i1, j1, tail):
    """Pushing-model cell law over (i2, j2) in float64 (oracle/sampling use)."""
    z = s * s
    qJ = -xi / s
    qI = -th / s
    pi = (
        _fpoch_inf(z * qI, q)
        * _fpoch_inf(z * qJ, q)
        / (_fpoch_inf(z, q) * _fpoch_inf(z * qI * qJ, q))
    )

    def bdry(xpar, k):
        return xpar ** k * _fpoch(-s / xpar, q, k) / _fpoch(q, q, k)

    den = pi * bdry(th, i1) * bdry(xi, j1)
    items = []
    acc = 0.0
    peak = 0.0
    j2 = max(0, j1 - i1)
    start = j2
    while True:
        i2 = i1 + j2 - j1
        try:
            p = bdry(th, i2) * bdry(xi, j2) * _fcross(z, qI, qJ, q, j2, i2, j1, i1) / den
        except OverflowError:
            p = float("nan")
        if p > 0:
            items.append(((i2, j2), p))
            acc += p
            peak = max(peak, p)
        # term-size stopping rule (float64 running sums cannot resolve
        # absolute tails below machine precision); NaN or negative noise far
        # in the tail also terminates
        if acc > 0 and (not p >= 0 or (p < tail * acc and p < peak)):
            break
        j2 += 1
        if j2 - start > 6000:
            raise StateSpaceTooLarge("cell law failed to accumulate mass")
    return items


def _cell_law(model, pars, qp, i1, j1, cache, tail=None):
    """Conditional law over (i2, j2) at one cell; cached.

    The two up-right models stay exact-rational (bounded branching).  The
    pushing model's unbounded sums are evaluated in apfloat: deep states make
    exact rationals balloon through q^{i1 i2} powers.
    """
    key = (pars, i1, j1)
    got = cache.get(key)
    if got is not None:
        return got
    tail = mp.mpf("1e-18") if tail is None else tail
    items = []
    if model == "s6v":
        for i2 in (0, 1):
            j2 = i1 + j1 - i2
            if j2 in (0, 1):
                p = stoch_weight(model, pars, qp, (i1, j1, i2, j2))
                if p != 0:
                    items.append(((i2, j2), p))
    elif model == "hs6v":
        for j2 in (0, 1):
            i2 = i1 + j1 - j2
            if i2 >= 0:
                p = stoch_weight(model, pars, qp, (i1, j1, i2, j2))
                if p != 0:
                    items.append(((i2, j2), p))
    else:
        items = _phi43_law_f64(
            float(pars[0]), float(pars[1]), float(qp.q), float(qp.s), i1, j1,
            max(float(tail), 1e-15),
        )
    floats = []
    acc = 0.0
    for st, p in items:
        acc += float(as_mp(p))
        floats.append((st, acc))
    got = cache[key] = (items, floats)
    return got


def boundary_laws(model, row_params, col_params, qp, boundary):
    """Per-row laws of the left boundary values and per-column laws of the
    bottom boundary values, as lists of DiscreteLaw-like objects."""
    q, s = qp

    class Point:
        def __init__(self, v):
            self.v = v

        def items(self):
            return [(self.v, Fraction(1))]

        def sample(self, rng):
            return self.v

    class LawWrap:
        def __init__(self, law, tail=mp.mpf("1e-14")):
            self.law = law
            self.tail = tail

        def items(self):
            out = []
            acc = mp.mpf(0)
            k = 0
            while acc < 1 - self.tail:
                p = self.law.pmf(k)
                out.append((k, p))
                acc += p
                k += 1
                if k > 4000:
                    raise StateSpaceTooLarge("boundary law truncation failed")
            return out

        def sample(self, rng):
            return self.law.sample(rng)

    if boundary == "step":
        if model in ("s6v", "hs6v"):
            left = [Point(1) for _ in row_params]
            bottom = [Point(0) for _ in col_params]
        else:
            left = [Point(0) for _ in row_params]
            bottom = [Point(0) for _ in col_params]
        return left, bottom
    kind, alpha, beta = boundary
    if kind != "stationary":
        raise ParamOutOfRange(f"unknown boundary {boundary!r}")
    if alpha == 0 and beta == 0:
        return boundary_laws(model, row_params, col_params, qp, "step")
    if model == "s6v":
        left = [LawWrap(DiscreteLaw.bernoulli(1 / (1 + u * beta))) for u in row_params]
        bottom = [
            LawWrap(DiscreteLaw.bernoulli(v * alpha / (1 + v * alpha))) for v in col_params
        ]
    elif model == "hs6v":
        left = [LawWrap(DiscreteLaw.bernoulli(1 / (1 + u * beta))) for u in row_params]
        bottom = [LawWrap(DiscreteLaw.qnb(-s / th, alpha * th, q)) for th in col_params]
    else:
        left = [LawWrap(DiscreteLaw.qnb(-s / xi, beta * xi, q)) for xi in row_params]
        bottom = [LawWrap(DiscreteLaw.qnb(-s / th, alpha * th, q)) for th in col_params]
    return left, bottom


class EdgeGrid:
    """Edge occupancies of one sampled trajectory on [1..X] x [1..Y].

    v[(x, y)] is the vertical edge leaving vertex (x, y) upward (y = 0 rows
    hold the bottom boundary values); h[(x, y)] the horizontal edge leaving
    (x, y) rightward (x = 0 holds the left boundary values).
    """

    def __init__(self, model, X, Y, v, h, b_h, b_v, row_params, col_params):
        self.model = model
        self.X = X
        self.Y = Y
        self.v = v
        self.h = h
        self.b_h = b_h
        self.b_v = b_v
        self.row_params = row_params
        self.col_params = col_params

    def to_csv(self):
        buf = io.StringIO()
        w = csv.writer(buf)
        w.writerow(["edge", "x", "y", "value"])
        for (x, y), val in sorted(self.v.items()):
            w.writerow(["vertical", x, y, val])
        for (x, y), val in sorted(self.h.items()):
            w.writerow(["horizontal", x, y, val])
        return buf.getvalue()

    def to_json(self):
        return {
            "model": self.model,
            "extents": [self.X, self.Y],
            "vertical": {f"({x},{y})": v for (x, y), v in sorted(self.v.items())},
            "horizontal": {f"({x},{y})": v for (x, y), v in sorted(self.h.items())},
        }


class HeightGrid:
    """Integer height surface attached to one trajectory.

    variant 'centered': zero at the origin, gradient given by the edges
    (up-right models).  variant 'pushing': counts paths separating the origin
    from the site (up-left model).  The independent shift variable used by
    the matching theorems lives in ``shift``.
    """

    def __init__(self, variant, values, shift=0):
        self.variant = variant
        self.values = values
        self.shift = shift

    def __getitem__(self, xy):
        return self.values[xy]

    def to_csv(self):
        buf = io.StringIO()
        w = csv.writer(buf)
        w.writerow(["x", "y", "height"])
        for (x, y), val in sorted(self.values.items()):
            w.writerow([x, y, val])
        return buf.getvalue()


def sample_model(model, row_params, col_params, qp, boundary, seed=None, rng=None, cache=None):
    """One trajectory of a stochastic vertex model on the quadrant window
    [1..X] x [1..Y]; returns (EdgeGrid, HeightGrid)."""
    if model not in MODELS:
        raise ParamOutOfRange(f"unknown model {model!r}")
    _validate_params(model, row_params, col_params, qp)
    X, Y = len(col_params), len(row_params)
    rng = rng if rng is not None else make_rng(seed)
    cache = cache if cache is not None else {}
    left, bottom = boundary_laws(model, row_params, col_params, qp, boundary)
    b_v = [None] + [left[y - 1].sample(rng) for y in range(1, Y + 1)]
    b_h = [None] + [bottom[x - 1].sample(rng) for x in range(1, X + 1)]
    v = {}
    h = {}
    for x in range(1, X + 1):
        v[(x, 0)] = b_h[x]
    for y in range(1, Y + 1):
        h[(0, y)] = b_v[y]
    for d in range(2, X + Y + 1):
        for x in range(max(1, d - Y), min(X, d - 1) + 1):
            y = d - x
            pars = _cell_params(model, row_params, col_params, x, y)
            _, floats = _cell_law(model, pars, qp, v[(x, y - 1)], h[(x - 1, y)], cache)
            u = rng.random() * floats[-1][1]
            st = floats[-1][0]
            for cand, c in floats:
                if u <= c:
                    st = cand
                    break
            v[(x, y)], h[(x, y)] = st
    heights = _height_values(model, X, Y, v, h, b_h, b_v)
    grid = EdgeGrid(model, X, Y, v, h, b_h, b_v, row_params, col_params)
    return grid, heights


def _cell_params(model, row_params, col_params, x, y):
    return (row_params[y - 1], col_params[x - 1])


def _validate_params(model, row_params, col_params, qp):
    q, s = qp
    if model == "s6v":
        for u in row_params:
            for v in col_params:
                if not 0 < u * v < 1:
                    raise ParamOutOfRange("six-vertex needs 0 < u v < 1")
    elif model == "hs6v":
        for u in row_params:
            if not 0 <= u < 1:
                raise ParamOutOfRange("row parameters must lie in [0,1)")
        for th in col_params:
            if not (-s <= th <= -1 / s):
                raise ParamOutOfRange("column parameters must lie in [-s, -1/s]")
    else:
        qp.require_sqw_box()
        for x in list(row_params) + list(col_params):
            if not (-s <= x <= -1 / s):
                raise ParamOutOfRange("parameters must lie in [-s, -1/s]")


def _height_values(model, X, Y, v, h, b_h, b_v):
    values = {}
    if model in ("s6v", "hs6v"):
        # centered height: rightward horizontal crossings minus bottom inflow
        for x in range(0, X + 1):
            off = -sum(b_h[1 : x + 1])
            acc = off
            values[(x, 0)] = acc
            for y in range(1, Y + 1):
                acc += h[(x, y)] if x >= 1 else b_v[y]
                values[(x, y)] = acc
        return HeightGrid("centered", values)
    for x in range(0, X + 1):
        acc = 0
        values[(x, 0)] = sum(b_h[1 : x + 1])
        for y in range(1, Y + 1):
            acc += b_v[y]
            if x == 0:
                values[(x, y)] = acc
            else:
                values[(x, y)] = values[(x - 1, y)] + v[(x, y)]
    return HeightGrid("pushing", values)


def reconstruct_edges(height_grid, model, X, Y):
    """Invert the height surface back to edge occupancies (consistency check).

    Returns (v, h) including the boundary entries v[(x,0)] and h[(0,y)].
    """
    vals = height_grid.values
    v = {}
    h = {}
    if model in ("s6v", "hs6v"):
        for y in range(1, Y + 1):
            h[(0, y)] = vals[(0, y)] - vals[(0, y - 1)]
            for x in range(1, X + 1):
                h[(x, y)] = vals[(x, y)] - vals[(x, y - 1)]
        for x in range(1, X + 1):
            v[(x, 0)] = vals[(x - 1, 0)] - vals[(x, 0)]
            for y in range(1, Y + 1):
                v[(x, y)] = v[(x, y - 1)] + h[(x - 1, y)] - h[(x, y)]
        return v, h
    for x in range(1, X + 1):
        v[(x, 0)] = vals[(x, 0)] - vals[(x - 1, 0)]
        for y in range(1, Y + 1):
            v[(x, y)] = vals[(x, y)] - vals[(x - 1, y)]
    for y in range(1, Y + 1):
        h[(0, y)] = vals[(0, y)] - vals[(0, y - 1)]
        for x in range(1, X + 1):
            # pushing-model conservation: i1 + j2 = i2 + j1
            h[(x, y)] = v[(x, y)] + h[(x - 1, y)] - v[(x, y - 1)]
    return v, h


# ---------------------------------------------------------------------------
# exact one-point height law by column-to-column transfer
# ---------------------------------------------------------------------------


def exact_height_dist(model, row_params, col_params, qp, boundary, x, y,
                      prob_floor=None, max_states=200000):
    """Exact law of the height observable at (x, y).

    For the up-right models this is the centered height; for the pushing
    model the origin-separating count.  Stationary boundaries are enumerated
    with their weights.  Returns (law dict value -> prob, dropped_mass): the
    dropped mass bounds the truncation error of unbounded boundary laws and
    state pruning.

    The transfer state is the vector of horizontal occupancies along one
    column line plus the accumulated offset; for the up-right models the
    horizontal occupancies live in {0,1} so the state space is 2^Y times the
    offset range.
    """
    if model not in MODELS:
        raise ParamOutOfRange(f"unknown model {model!r}")
    _validate_params(model, row_params, col_params, qp)
    X, Y = x, y
    if Y > len(row_params) or X > len(col_params):
        raise ParamOutOfRange("site outside the parameter window")
    exact_cells = model in ("s6v", "hs6v") and is_exact(
        qp.q, qp.s, *row_params, *col_params
    )
    exact_boundary = boundary == "step" or (
        model == "s6v" and is_exact(boundary[1], boundary[2])
    )
    exact = exact_cells and exact_boundary
    left, bottom = boundary_laws(model, row_params, col_params, qp, boundary)
    zero = Fraction(0) if exact else mp.mpf(0)
    dropped = mp.mpf(0)
    prob_floor = mp.mpf("1e-22") if prob_floor is None else prob_floor
    cache = {}
    # initial states: left boundary column, with accumulated observable
    states = {}
    for combo, wgt in _product_boundary(left[:Y]):
        if model == "phi43":
            acc = sum(combo[:y])
        else:
            acc = 0
        key = (tuple(combo), acc)
        states[key] = states.get(key, zero) + (wgt if exact else as_mp(wgt))
    for xcol in range(1, X + 1):
        new_states = {}
        for (hvec, acc), p0 in states.items():
            for b, wb in bottom[xcol - 1].items():
                pb = p0 * (wb if exact else as_mp(wb))
                # sweep the column bottom-up
                branches = [(b, [], pb)]
                for yrow in range(1, Y + 1):
                    pars = _cell_params(model, row_params, col_params, xcol, yrow)
                    nxt = []
                    for vcur, houts, pcur in branches:
                        items, _ = _cell_law(model, pars, qp, vcur, hvec[yrow - 1], cache)
                        for (i2, j2), pc in items:
                            pnew = pcur * (pc if exact else as_mp(pc))
                            if not exact and pnew < prob_floor:
                                dropped += pnew
                                continue
                            nxt.append((i2, houts + [j2], pnew))
                    branches = nxt
                for vtop, houts, pcur in branches:
                    if model == "phi43":
                        acc_new = acc + _column_vertical_at(model, b, hvec, houts, y)
                    else:
                        acc_new = acc + b
                    key = (tuple(houts), acc_new)
                    if not exact and pcur < prob_floor:
                        dropped += pcur
                        continue
                    new_states[key] = new_states.get(key, zero) + pcur
        states = new_states
        if len(states) > max_states:
            raise StateSpaceTooLarge(f"{len(states)} transfer states at column {xcol}")
    law = {}
    for (hvec, acc), p in states.items():
        if model == "phi43":
            val = acc
        else:
            val = sum(hvec[:y]) - acc
        law[val] = law.get(val, zero) + p
    return law, dropped


def _column_vertical_at(model, b, h_in, h_out, y):
    """Vertical occupancy leaving row y of a pushing-model column, from
    conservation i2 = i1 + j2 - j1 accumulated up the column."""
    v = b
    for yr in range(1, y + 1):
        v = v + h_out[yr - 1] - h_in[yr - 1]
    return v


def _product_boundary(laws):
    """Cartesian product of per-row boundary laws with product weights."""
    combos = [((), Fraction(1))]
    for law in laws:
        new = []
        for combo, wgt in combos:
            for val, w in law.items():
                new.append((combo + (val,), wgt * w))
        combos = new
    return combos


def shift_law(alpha, beta, qp, tail=None):
    """Law of the independent q-Poisson shift with parameter alpha*beta."""
    if alpha == 0 or beta == 0:
        return {0: Fraction(1)}
    law = DiscreteLaw.qpoi(alpha * beta, qp.q)
    tail = mp.mpf("1e-20") if tail is None else tail
    out = {}
    acc = mp.mpf(0)
    k = 0
    while acc < 1 - tail:
        p = law.pmf(k)
        out[k] = p
        acc += p
        k += 1
    return out


def convolve_laws(base, shift, sign=-1):
    """Law of H + sign * M for independent H ~ base, M ~ shift."""
    out = {}
    for hval, p in base.items():
        for m, pm in shift.items():
            val = hval + sign * m
            out[val] = out.get(val, 0) + as_mp(p) * as_mp(pm)
    return out


# ---------------------------------------------------------------------------
# matching the model heights with the field marginals
# ---------------------------------------------------------------------------


def field_specs_for(model, row_params, col_params):
    """The spec lists of the random field matched to a model."""
    if model == "s6v":
        return [shl(u) for u in row_params], [shl(v) for v in col_params]
    if model == "hs6v":
        return [shl(u) for u in row_params], [sqw(th) for th in col_params]
    return [sqw(xi) for xi in row_params], [sqw(th) for th in col_params]


def model_height_from_field_length(model, y, ell):
    """The model-height value matched to a field diagram of length ell."""
    if model in ("s6v", "hs6v"):
        return y - ell
    return ell


def match_marginal_exact(model, row_params, col_params, qp, boundary, x, y,
                         max_part=24, tol=None):
    """Compare the exact model height law at (x, y) with the exact law of the
    matched field observable; returns a report dict."""
    from .symfun import length_law
    from .weights import sg

    tol = mp.mpf("1e-10") if tol is None else tol
    rows, cols = field_specs_for(model, row_params[:y], col_params[:x])
    if boundary == "step":
        alpha = beta = Fraction(0)
        max_len = y + 2 if model != "phi43" else max_part
        max_size = None
    else:
        _, alpha, beta = boundary
        rows = [sg(alpha)] + rows
        cols = [sg(beta)] + cols
        max_len = max_part
        max_size = max_part
    field_law_raw, defect = length_law(rows, cols, qp, max_part, max_len, max_size=max_size)
    if model in ("s6v", "hs6v"):
        field_law = {y - ell: p for ell, p in field_law_raw.items()}
    else:
        field_law = dict(field_law_raw)
    model_law_raw, dropped = exact_height_dist(
        model, row_params, col_params, qp, boundary, x, y
    )
    sh = shift_law(alpha, beta, qp)
    sign = -1 if model in ("s6v", "hs6v") else +1
    model_law = convolve_laws(model_law_raw, sh, sign=sign)
    values = sorted(set(field_law) | set(model_law))
    worst = mp.mpf(0)
    for val in values:
        a = as_mp(field_law.get(val, 0))
        b = as_mp(model_law.get(val, 0))
        worst = max(worst, abs(a - b))
    budget = as_mp(defect) + as_mp(dropped) + tol
    return {
        "model": model,
        "site": (x, y),
        "boundary": boundary,
        "worst_abs_diff": worst,
        "field_defect": as_mp(defect),
        "model_dropped": as_mp(dropped),
        "pass": bool(worst <= budget),
        "field_law": field_law,
        "model_law": model_law,
    }


def match_marginal_mc(model, row_params, col_params, qp, boundary, x, y,
                      trials, seed, max_part=20, sigmas=4.0):
    """Monte Carlo frequencies of the model height against the exact field
    law, z-tested per value at the given sigma level."""
    from .symfun import length_law
    from .weights import sg

    rows, cols = field_specs_for(model, row_params[:y], col_params[:x])
    if boundary == "step":
        alpha = beta = Fraction(0)
        max_len = y + 2 if model != "phi43" else max_part
        max_size = None
    else:
        _, alpha, beta = boundary
        rows = [sg(alpha)] + rows
        cols = [sg(beta)] + cols
        max_len = max_part
        max_size = max_part
    field_law_raw, defect = length_law(rows, cols, qp, max_part, max_len, max_size=max_size)
    if model in ("s6v", "hs6v"):
        field_law = {y - ell: p for ell, p in field_law_raw.items()}
    else:
        field_law = dict(field_law_raw)
    rng = make_rng(seed)
    sh = shift_law(alpha, beta, qp)
    shift_vals = sorted(sh)
    shift_cum = []
    accp = 0.0
    for k in shift_vals:
        accp += float(as_mp(sh[k]))
        shift_cum.append(accp)
    cache = {}
    counts = {}
    sign = -1 if model in ("s6v", "hs6v") else +1
    for _ in range(trials):
        _, hg = sample_model(model, row_params, col_params, qp, boundary, rng=rng, cache=cache)
        u = rng.random() * shift_cum[-1]
        m = shift_vals[-1]
        for k, c in zip(shift_vals, shift_cum):
            if u <= c:
                m = k
                break
        val = hg[(x, y)] + sign * m
        counts[val] = counts.get(val, 0) + 1
    report = {"pass": True, "comparisons": [], "defect": as_mp(defect)}
    for val, c in sorted(counts.items()):
        p = float(as_mp(field_law.get(val, 0)))
        phat = c / trials
        se = math.sqrt(max(p * (1 - p), 1e-12) / trials)
        ok = abs(phat - p) <= sigmas * se + float(as_mp(defect))
        report["comparisons"].append((val, phat, p, ok))
        if c > 50 and not ok:
            report["pass"] = False
    return report


# ---------------------------------------------------------------------------
# the pushing particle view of the third model
# ---------------------------------------------------------------------------


def pushtasep_view(grid, N):
    """Particle trajectories read off a pushing-model trajectory.

    Particles y_1 > y_2 > ... start at y_1(0) = -1 with initial gaps given by
    the bottom boundary values; at each time step the first particle jumps by
    the left boundary value and particle i+1's jump is the horizontal output
    at cell (i, t).  Returns {t: (y_1(t), ..., y_N(t))}.
    """
    if grid.model != "phi43":
        raise ParamOutOfRange("particle view requires the pushing model")
    if N - 1 > grid.X:
        raise WindowTooSmall(f"window {grid.X} cannot drive {N} particles")
    ys = [-1]
    for k in range(1, N):
        ys.append(ys[-1] - 1 - grid.b_h[k])
    out = {0: tuple(ys)}
    for t in range(1, grid.Y + 1):
        jumps = [grid.b_v[t]]
        for i in range(2, N + 1):
            jumps.append(grid.h[(i - 1, t)])
        ys = [yi - L for yi, L in zip(ys, jumps)]
        if any(ys[i] <= ys[i + 1] for i in range(len(ys) - 1)):
            raise WindowTooSmall("particle order violated; window too small")
        out[t] = tuple(ys)
    return out


def trajectory_to_csv(traj):
    buf = io.StringIO()
    w = csv.writer(buf)
    w.writerow(["t", "particle", "position"])
    for t, ys in sorted(traj.items()):
        for i, pos in enumerate(ys, start=1):
            w.writerow([t, i, pos])
    return buf.getvalue()
