"""Local moves from the Yang-Baxter equation and the lattice random fields
they generate.

The basic identity is a three-vertex sum: a cross vertex attached to a column
of two row vertices (an up-right row over a down-right dual row) has equal
total weight with the cross on either side.  Its terms are indexed by the
internal occupancies, so the identity is a summation identity amenable to a
coupling refinement: a pair of stochastic kernels (forward / backward) whose
reversibility reproduces the identity.  We use the product coupling
throughout; the single-term boundary column forces a unique move.

Dragging the cross through the full two-row lattice (columns 0, 1, 2, ...)
maps a middle diagram kappa to a random nu; sweeping such drags over a
quadrant grows the random field site by site.
"""

import math
from fractions import Fraction

import mpmath as mp

from .errors import (
    AdmissibilityError,
    NonStochasticPoint,
    ParamOutOfRange,
    ZeroMass,
)
from .partitions import EMPTY, Partition
from .qkernel import as_mp, is_exact, make_rng
from .weights import (
    Spec,
    admissible,
    cross_family,
    family,
    pi_factor,
    u0_row,
    u0_weight,
    u0_weight_times_pi,
)


# ---------------------------------------------------------------------------
# Yang-Baxter residuals and explicit bijectivizations of one three-vertex block
# ---------------------------------------------------------------------------


def ybe_block_sides(spec_f, spec_g, qp, externals):
    """Terms of both sides of the three-vertex identity at fixed externals.

    externals = (i1, i2, i3, j1, j2, j3): i1/j1 on the dual (column) line,
    i2/j2 on the row line, i3/j3 vertical.  Returns (left, right) where each
    is a list of (internal_state, weight); internal states are (k1, k2, k3).
    """
    i1, i2, i3, j1, j2, j3 = externals
    famf = family(spec_f, qp)
    famg = family(spec_g, qp)
    cf = cross_family(spec_f, spec_g, qp)
    left = []
    # cross(i2,i1;k2,k1) * wG*(i3,k1;k3,j1) * wF(k3,k2;j3,j2); free k1
    for k1 in range(0, i3 + j1 + 1):
        k2 = i2 + k1 - i1
        k3 = i3 + j1 - k1
        if k2 < 0 or k3 < 0 or k3 + k2 != j3 + j2:
            continue
        w = cf.R(i2, i1, k2, k1)
        if w == 0:
            continue
        w = w * famg.w_dual(i3, k1, k3, j1)
        if w == 0:
            continue
        w = w * famf.w(k3, k2, j3, j2)
        if w == 0:
            continue
        left.append(((k1, k2, k3), w))
    right = []
    # wG*(k3,i1;j3,k1) * wF(i3,i2;k3,k2) * cross(k2,k1;j2,j1); free k3
    for k3 in range(0, min(i3 + i2, j3 + i1) + 1):
        k2 = i3 + i2 - k3
        k1 = j3 + i1 - k3
        if k1 < 0 or k2 < 0:
            continue
        w = famg.w_dual(k3, i1, j3, k1)
        if w == 0:
            continue
        w = w * famf.w(i3, i2, k3, k2)
        if w == 0:
            continue
        w = w * cf.R(k2, k1, j2, j1)
        if w == 0:
            continue
        right.append(((k1, k2, k3), w))
    return left, right


def ybe_residual(spec_f, spec_g, qp, externals):
    """Sum(left) - Sum(right) of the three-vertex identity; exactly zero in
    exact arithmetic for every supported specialization pair."""
    left, right = ybe_block_sides(spec_f, spec_g, qp, externals)
    zero = Fraction(0)
    return sum((w for _, w in left), zero) - sum((w for _, w in right), zero)


class Bijectivization:
    """Product-coupling refinement of one three-vertex summation identity.

    p_fwd[a][b] = w(b) / sum w(b'), p_bwd[b][a] = w(a) / sum w(a'): rows sum
    to one on both sides and the reversibility w(a) p_fwd(a,b) =
    w(b) p_bwd(b,a) holds term by term.  When a side is a singleton the
    coupling is the unique one.
    """

    def __init__(self, left, right):
        self.left = dict(left)
        self.right = dict(right)
        for w in list(self.left.values()) + list(self.right.values()):
            if w < 0:
                raise NonStochasticPoint(f"negative local weight {w}")
        self.left_total = sum(self.left.values())
        self.right_total = sum(self.right.values())
        if self.left_total == 0 or self.right_total == 0:
            raise ZeroMass("a side of the local identity carries no mass")

    def p_fwd(self, a, b):
        if a not in self.left:
            raise ParamOutOfRange(f"unknown source state {a}")
        return self.right.get(b, Fraction(0)) / self.right_total

    def p_bwd(self, b, a):
        if b not in self.right:
            raise ParamOutOfRange(f"unknown source state {b}")
        return self.left.get(a, Fraction(0)) / self.left_total

    def reversibility_defect(self, a, b):
        """w(a) p_fwd(a,b) - w(b) p_bwd(b,a); zero by construction."""
        return self.left[a] * self.p_fwd(a, b) - self.right[b] * self.p_bwd(b, a)


def build_bijectivization(spec_f, spec_g, qp, externals):
    """Stochastic product coupling for the block at the given externals."""
    left, right = ybe_block_sides(spec_f, spec_g, qp, externals)
    return Bijectivization(left, right)


# ---------------------------------------------------------------------------
# the column-0 law as a discrete distribution object
# ---------------------------------------------------------------------------


class U0Law:
    """Joint law of the outgoing horizontal multiplicities (j0', j0) at the
    boundary column, conditioned on incoming (i0, i0')."""

    def __init__(self, spec_f, spec_g, qp, i0, i0p):
        self.inputs = (i0, i0p)
        self.items = u0_row(spec_f, spec_g, qp, i0, i0p)
        self._floats = None

    def pmf(self, j0p, j0):
        for (a, b), p in self.items:
            if (a, b) == (j0p, j0):
                return p
        return Fraction(0)

    def total(self):
        return sum(p for _, p in self.items)

    def sample(self, rng):
        if self._floats is None:
            acc, cum = 0.0, []
            for _, p in self.items:
                acc += float(as_mp(p))
                cum.append(acc)
            self._floats = cum
        u = rng.random() * self._floats[-1]
        for ((a, b), _), c in zip(self.items, self._floats):
            if u <= c:
                return a, b
        return self.items[-1][0]


def u0_dist(i0, i0p, spec_f, spec_g, qp):
    """The boundary-column law; raises AdmissibilityError off the region."""
    if not admissible(spec_f, spec_g, qp):
        raise AdmissibilityError("spectral parameters outside the admissible set")
    return U0Law(spec_f, spec_g, qp, i0, i0p)


# ---------------------------------------------------------------------------
# dragging the cross through the full two-row lattice
# ---------------------------------------------------------------------------


def _spec_to_mp(spec):
    from dataclasses import replace

    return replace(
        spec,
        x=as_mp(spec.x) if spec.x is not None else None,
        qJ=as_mp(spec.qJ) if spec.qJ is not None else None,
    )


class DragContext:
    """Caches of local laws for one ordered spec pair at fixed (q, s).

    numeric=True mirrors all parameters into apfloat before any evaluation:
    sampling paths reach deep states whose exact rationals balloon, while the
    identity checks that need exactness use the default context.
    """

    def __init__(self, spec_f, spec_g, qp, numeric=False):
        if not admissible(spec_f, spec_g, qp):
            raise AdmissibilityError("spectral parameters outside the admissible set")
        if numeric:
            from .qkernel import QParamsView

            spec_f = _spec_to_mp(spec_f)
            spec_g = _spec_to_mp(spec_g)
            qp = QParamsView(as_mp(qp.q), as_mp(qp.s))
        self.spec_f = spec_f
        self.spec_g = spec_g
        self.qp = qp
        self.famf = family(spec_f, qp)
        self.famg = family(spec_g, qp)
        self.cross = cross_family(spec_f, spec_g, qp)
        self._u0 = {}
        self._col = {}
        self._tail = {}

    def u0_law(self, i0, i0p):
        law = self._u0.get((i0, i0p))
        if law is None:
            law = self._u0[(i0, i0p)] = U0Law(self.spec_f, self.spec_g, self.qp, i0, i0p)
        return law

    def column_weights(self, m, l, i_old, ip_old, j_in, jp_in):
        """Unnormalized weights over the new internal multiplicity n at one
        interior column: wG*(n, jp_in; l, jp_out) wF(m, j_in; n, j_out)
        R(j_out, jp_out; ip_old, i_old)."""
        key = (m, l, i_old, ip_old, j_in, jp_in)
        got = self._col.get(key)
        if got is None:
            items = []
            for n in range(0, min(m + j_in, l + jp_in) + 1):
                j_out = m + j_in - n
                jp_out = l + jp_in - n
                w = self.famg.w_dual(n, jp_in, l, jp_out)
                if w == 0:
                    continue
                w = w * self.famf.w(m, j_in, n, j_out)
                if w == 0:
                    continue
                w = w * self.cross.R(j_out, jp_out, ip_old, i_old)
                if w == 0:
                    continue
                if w < 0:
                    raise NonStochasticPoint(f"negative drag weight at n={n}")
                items.append((n, w))
            total = sum(w for _, w in items)
            if total == 0:
                raise ZeroMass(f"empty column law at {key}")
            floats = []
            acc = 0.0
            for n, w in items:
                acc += float(as_mp(w / total)) if is_exact(w, total) else float(
                    as_mp(w) / as_mp(total)
                )
                floats.append((n, acc))
            got = self._col[key] = (items, total, floats)
        return got

    def tail_law(self, j):
        """Law of the deposit n in {0..j} at a far column where everything
        else is empty: wF(0,j;n,j-n) wG*(n,j;0,j-n) R(j-n,j-n;0,0)."""
        got = self._tail.get(j)
        if got is None:
            items = []
            for n in range(0, j + 1):
                w = self.famf.w(0, j, n, j - n)
                if w == 0:
                    continue
                w = w * self.famg.w_dual(n, j, 0, j - n)
                if w == 0:
                    continue
                w = w * self.cross.R(j - n, j - n, 0, 0)
                if w == 0:
                    continue
                if w < 0:
                    raise NonStochasticPoint("negative tail weight")
                items.append((n, w))
            total = sum(w for _, w in items)
            if total == 0:
                raise ZeroMass(f"empty tail law at j={j}")
            p_stay = next((w for n, w in items if n == 0), Fraction(0)) / total
            if p_stay == 1:
                raise AdmissibilityError("surviving paths never terminate")
            got = self._tail[j] = (items, total, float(as_mp(p_stay)))
        return got


def _length(p):
    return p.ell


def _col_data(kappa, lam, mu, H):
    """Per-column data: multiplicities of mu, lam and old fluxes of kappa."""
    kc = kappa.conjugate()
    lc = lam.conjugate()
    mc = mu.conjugate()
    ms = [0] * (H + 2)
    ls = [0] * (H + 2)
    i_old = [0] * (H + 2)
    ip_old = [0] * (H + 2)
    for h in range(1, H + 2):
        i_old[h - 1] = mc.part(h) - kc.part(h)
        ip_old[h - 1] = lc.part(h) - kc.part(h)
    for h in range(1, H + 1):
        ms[h] = mc.part(h) - mc.part(h + 1)
        ls[h] = lc.part(h) - lc.part(h + 1)
    return ms, ls, i_old, ip_old


def _check_drag_inputs(kappa, lam, mu, ctx):
    from .partitions import STEP_RELATION

    rel_f = STEP_RELATION[ctx.spec_f.kind]
    rel_g = STEP_RELATION[ctx.spec_g.kind]
    if not rel_f(kappa, lam):
        raise ParamOutOfRange("kappa does not precede lam on the row line")
    if not rel_g(kappa, mu):
        raise ParamOutOfRange("kappa does not precede mu on the column line")


def u_fwd(kappa, lam, mu, spec_f, spec_g, qp, rng, ctx=None):
    """Drag the cross rightward: sample nu given (kappa; lam, mu).

    Column 0 uses the unique boundary move; interior columns use the product
    coupling; beyond the supports the surviving paths exit at geometrically
    distributed columns sampled in closed form (no truncation cap).
    """
    ctx = ctx or DragContext(spec_f, spec_g, qp)
    _check_drag_inputs(kappa, lam, mu, ctx)
    H = max(lam.part(1), mu.part(1))
    ms, ls, i_old, ip_old = _col_data(kappa, lam, mu, H)
    i0 = _length(mu) - _length(kappa)
    i0p = _length(lam) - _length(kappa)
    jp, j = ctx.u0_law(i0, i0p).sample(rng)
    new_parts = []
    for h in range(1, H + 1):
        _, _, floats = ctx.column_weights(
            ms[h], ls[h], i_old[h], ip_old[h], j, jp
        )
        u = rng.random() * floats[-1][1]
        n = floats[-1][0]
        for cand, c in floats:
            if u <= c:
                n = cand
                break
        if n:
            new_parts.extend([h] * n)
        j = ms[h] + j - n
        jp = ls[h] + jp - n
    # homogeneous tail: j == jp survivors drop at geometric columns
    h = H
    while j > 0:
        items, total, p_stay = ctx.tail_law(j)
        # number of empty columns before the next deposit
        if p_stay > 0:
            gap = int(math.floor(math.log(max(rng.random(), 1e-300)) / math.log(p_stay)))
        else:
            gap = 0
        h += gap + 1
        # deposit size conditioned on n >= 1
        weights = [(n, w) for n, w in items if n > 0]
        ftot = float(as_mp(sum(w for _, w in weights)))
        u = rng.random()
        acc = 0.0
        n = weights[-1][0]
        for cand, w in weights:
            acc += float(as_mp(w)) / ftot
            if u <= acc:
                n = cand
                break
        new_parts.extend([h] * n)
        j -= n
    return Partition(sorted(new_parts, reverse=True))


def u_fwd_prob(kappa, nu, lam, mu, spec_f, spec_g, qp, ctx=None):
    """Exact probability that the rightward drag maps kappa to nu."""
    ctx = ctx or DragContext(spec_f, spec_g, qp)
    _check_drag_inputs(kappa, lam, mu, ctx)
    H = max(lam.part(1), mu.part(1))
    ms, ls, i_old, ip_old = _col_data(kappa, lam, mu, H)
    i0 = _length(mu) - _length(kappa)
    i0p = _length(lam) - _length(kappa)
    nc = nu.conjugate()
    lc, mc = lam.conjugate(), mu.conjugate()
    j = nc.part(1) - mc.part(1)
    jp = nc.part(1) - lc.part(1)
    if j < 0 or jp < 0:
        return Fraction(0)
    prob = ctx.u0_law(i0, i0p).pmf(jp, j)
    if prob == 0:
        return Fraction(0)
    for h in range(1, H + 1):
        n = nu.mult(h)
        j_out = ms[h] + j - n
        jp_out = ls[h] + jp - n
        if j_out < 0 or jp_out < 0:
            return Fraction(0)
        items, total, _ = ctx.column_weights(ms[h], ls[h], i_old[h], ip_old[h], j, jp)
        w = next((w for cand, w in items if cand == n), Fraction(0))
        if w == 0:
            return Fraction(0)
        prob = prob * w / total
        j, jp = j_out, jp_out
    if j != jp:
        return Fraction(0)
    # tail columns: explicit product over empty and deposit columns
    h = H
    while j > 0:
        tail_parts = [p for p in nu if p > h]
        if not tail_parts:
            return Fraction(0)
        nxt = min(tail_parts)
        n = nu.mult(nxt)
        items, total, _ = ctx.tail_law(j)
        p0 = next((w for cand, w in items if cand == 0), Fraction(0)) / total
        w = next((w for cand, w in items if cand == n), Fraction(0))
        if w == 0:
            return Fraction(0)
        prob = prob * p0 ** (nxt - h - 1) * (w / total)
        j -= n
        h = nxt
    if any(p > h for p in nu):
        return Fraction(0)
    return prob


def u_fwd_prob_times_pi(kappa, nu, lam, mu, spec_f, spec_g, qp, ctx=None):
    """Pi(f;g) * u_fwd_prob(...): rational for every pair, so the
    reversibility identity can be checked exactly even when Pi itself is an
    infinite product."""
    ctx = ctx or DragContext(spec_f, spec_g, qp)
    _check_drag_inputs(kappa, lam, mu, ctx)
    H = max(lam.part(1), mu.part(1))
    ms, ls, i_old, ip_old = _col_data(kappa, lam, mu, H)
    i0 = _length(mu) - _length(kappa)
    i0p = _length(lam) - _length(kappa)
    nc = nu.conjugate()
    lc, mc = lam.conjugate(), mu.conjugate()
    j = nc.part(1) - mc.part(1)
    jp = nc.part(1) - lc.part(1)
    if j < 0 or jp < 0:
        return Fraction(0)
    prob = u0_weight_times_pi(spec_f, spec_g, qp, i0, i0p, jp, j)
    if prob == 0:
        return Fraction(0)
    for h in range(1, H + 1):
        n = nu.mult(h)
        j_out = ms[h] + j - n
        jp_out = ls[h] + jp - n
        if j_out < 0 or jp_out < 0:
            return Fraction(0)
        items, total, _ = ctx.column_weights(ms[h], ls[h], i_old[h], ip_old[h], j, jp)
        w = next((w for cand, w in items if cand == n), Fraction(0))
        if w == 0:
            return Fraction(0)
        prob = prob * w / total
        j, jp = j_out, jp_out
    if j != jp:
        return Fraction(0)
    h = H
    while j > 0:
        tail_parts = [p for p in nu if p > h]
        if not tail_parts:
            return Fraction(0)
        nxt = min(tail_parts)
        n = nu.mult(nxt)
        items, total, _ = ctx.tail_law(j)
        p0 = next((w for cand, w in items if cand == 0), Fraction(0)) / total
        w = next((w for cand, w in items if cand == n), Fraction(0))
        if w == 0:
            return Fraction(0)
        prob = prob * p0 ** (nxt - h - 1) * (w / total)
        j -= n
        h = nxt
    if any(p > h for p in nu):
        return Fraction(0)
    return prob


def u_fwd_length_marginal(kappa, lam, mu, spec_f, spec_g, qp, ctx=None):
    """Exact law of ell(nu) under the rightward drag.

    Every path leaving column 0 terminates as a part of nu, so
    ell(nu) = ell(mu) + j_0 identically and the law is the column-0 marginal.
    """
    ctx = ctx or DragContext(spec_f, spec_g, qp)
    _check_drag_inputs(kappa, lam, mu, ctx)
    i0 = _length(mu) - _length(kappa)
    i0p = _length(lam) - _length(kappa)
    law = {}
    for (jp, j), p in ctx.u0_law(i0, i0p).items:
        n = _length(mu) + j
        law[n] = law.get(n, Fraction(0)) + p
    return law


def u_bwd(nu, lam, mu, spec_f, spec_g, qp, rng, ctx=None):
    """Drag the cross leftward: sample kappa given (nu; lam, mu)."""
    ctx = ctx or DragContext(spec_f, spec_g, qp)
    probs = u_bwd_support(nu, lam, mu, spec_f, spec_g, qp, ctx)
    u = rng.random()
    acc = 0.0
    total = float(sum(as_mp(p) for _, p in probs))
    for kappa, p in probs:
        acc += float(as_mp(p)) / total
        if u <= acc:
            return kappa
    return probs[-1][0]


def u_bwd_support(nu, lam, mu, spec_f, spec_g, qp, ctx=None):
    """All (kappa, probability) of the leftward drag; the support is finite.

    Processes columns right to left.  A state records the pair of horizontal
    multiplicities (i, i') entering the cross from its right together with
    the already-decided high columns of kappa; distinct histories are kept
    apart so each kappa accumulates its exact probability.
    """
    ctx = ctx or DragContext(spec_f, spec_g, qp)
    from .partitions import STEP_RELATION

    rel_f = STEP_RELATION[ctx.spec_f.kind]
    rel_g = STEP_RELATION[ctx.spec_g.kind]
    if not rel_f(mu, nu):
        raise ParamOutOfRange("mu does not precede nu on the row line")
    if not rel_g(lam, nu):
        raise ParamOutOfRange("lam does not precede nu on the column line")
    H = max(nu.part(1), lam.part(1), mu.part(1))
    nc, lc, mc = nu.conjugate(), lam.conjugate(), mu.conjugate()
    states = {(0, 0, ()): Fraction(1)}
    for h in range(H, 0, -1):
        m_h = mc.part(h) - mc.part(h + 1)
        l_h = lc.part(h) - lc.part(h + 1)
        j_in = nc.part(h) - mc.part(h)
        jp_in = nc.part(h) - lc.part(h)
        if j_in < 0 or jp_in < 0:
            raise ParamOutOfRange("nu is not above both lam and mu")
        new_states = {}
        for (i_old, ip_old, parts), prob in states.items():
            weights = []
            for k in range(0, min(m_h + i_old, l_h + ip_old) + 1):
                k1 = m_h + i_old - k
                k2 = l_h + ip_old - k
                w = ctx.cross.R(j_in, jp_in, k2, k1)
                if w == 0:
                    continue
                w = w * ctx.famg.w_dual(m_h, k1, k, i_old)
                if w == 0:
                    continue
                w = w * ctx.famf.w(k, k2, l_h, ip_old)
                if w == 0:
                    continue
                if w < 0:
                    raise NonStochasticPoint("negative backward weight")
                weights.append((k, k1, k2, w))
            total = sum(w for *_, w in weights)
            if total == 0:
                continue
            for k, k1, k2, w in weights:
                key = (k1, k2, parts + (h,) * k)
                new_states[key] = new_states.get(key, Fraction(0)) + prob * w / total
        states = new_states
    out = {}
    for (i0, i0p, parts), prob in states.items():
        kappa = Partition(sorted(parts, reverse=True))
        out[kappa] = out.get(kappa, Fraction(0)) + prob
    return sorted(out.items())


def u_bwd_prob(nu, kappa, lam, mu, spec_f, spec_g, qp, ctx=None):
    """Exact probability that the leftward drag maps nu to kappa."""
    for cand, p in u_bwd_support(nu, lam, mu, spec_f, spec_g, qp, ctx):
        if cand == kappa:
            return p
    return Fraction(0)


# ---------------------------------------------------------------------------
# quadrant random fields
# ---------------------------------------------------------------------------


class Field:
    """A sampled random field: one Young diagram per quadrant site."""

    def __init__(self, extents, sites, row_specs, col_specs, boundary, seed):
        self.extents = extents             # (X, Y)
        self.sites = sites                 # {(x, y): Partition}
        self.row_specs = row_specs
        self.col_specs = col_specs
        self.boundary = boundary
        self.seed = seed

    def __getitem__(self, xy):
        return self.sites[xy]

    def to_json(self):
        def spec_json(sp):
            return {"kind": sp.kind, "x": str(sp.x)}

        return {
            "geometry": list(self.extents),
            "specs": {
                "rows": [spec_json(s) for s in self.row_specs],
                "columns": [spec_json(s) for s in self.col_specs],
            },
            "boundary": self.boundary if isinstance(self.boundary, str) else {
                "kind": "sg",
                "alpha": str(self.boundary[1]),
                "beta": str(self.boundary[2]),
            },
            "seed": self.seed,
            "sites": {f"({x},{y})": list(p) for (x, y), p in sorted(self.sites.items())},
        }


class FieldSampler:
    """Quadrant sweeps of forward drags with shared local-law caches.

    Boundary 'step' pins empty diagrams on both axes.  Boundary
    ('sg', alpha, beta) realizes the two-sided scaled geometric condition by
    the shifted-lattice construction: one extra scaled-geometric row and
    column are attached below/left of the quadrant, the extended field is
    grown from empty axes, and the result is restricted to the quadrant.
    """

    def __init__(self, row_specs, col_specs, boundary, qp):
        self.qp = qp
        self.row_specs = list(row_specs)
        self.col_specs = list(col_specs)
        self.boundary = boundary
        if boundary == "step":
            self._rows = [None] + self.row_specs         # 1-based
            self._cols = [None] + self.col_specs
            self._shift = 0
        elif isinstance(boundary, tuple) and boundary[0] == "sg":
            from .weights import sg

            alpha, beta = boundary[1], boundary[2]
            self._rows = [None, sg(alpha)] + self.row_specs
            self._cols = [None, sg(beta)] + self.col_specs
            self._shift = 1
        else:
            raise ParamOutOfRange(f"unknown boundary {boundary!r}")
        self._ctx = {}

    def ctx(self, x, y):
        key = (self._rows[y], self._cols[x])
        got = self._ctx.get(key)
        if got is None:
            got = self._ctx[key] = DragContext(
                self._rows[y], self._cols[x], self.qp, numeric=True
            )
        return got

    def sample(self, X, Y, rng=None, seed=None):
        rng = rng if rng is not None else make_rng(seed)
        sh = self._shift
        W, H = X + sh, Y + sh
        grid = {}
        for x in range(0, W + 1):
            grid[(x, 0)] = EMPTY
        for y in range(0, H + 1):
            grid[(0, y)] = EMPTY
        for d in range(2, W + H + 1):
            for x in range(max(1, d - H), min(W, d - 1) + 1):
                y = d - x
                nu = u_fwd(
                    grid[(x - 1, y - 1)],
                    grid[(x - 1, y)],
                    grid[(x, y - 1)],
                    self._rows[y],
                    self._cols[x],
                    self.qp,
                    rng,
                    ctx=self.ctx(x, y),
                )
                grid[(x, y)] = nu
        sites = {
            (x, y): grid[(x + sh, y + sh)]
            for x in range(0, X + 1)
            for y in range(0, Y + 1)
        }
        return Field((X, Y), sites, self.row_specs, self.col_specs, self.boundary, seed)


def sample_field(X, Y, row_specs, col_specs, boundary, qp, seed):
    """One trajectory of the random field on [0..X] x [0..Y]."""
    return FieldSampler(row_specs, col_specs, boundary, qp).sample(X, Y, seed=seed)
