"""Skew symmetric functions from lattice partition functions, their Cauchy
identities, and the induced probability measures on Young diagrams.

Two encodings coexist:

* arrow side -- every function is a partition function of a one-row lattice
  between the arrow configurations of two diagrams.  ``skew_F`` rows are
  up-right (weights ``w``), ``skew_G`` rows are down-right (dual weights
  ``w*``, larger diagram on the bottom).  Multi-variable versions branch over
  intermediate diagrams.
* label side -- the spin Hall-Littlewood family is indexed by the arrow
  diagrams themselves, the spin q-Whittaker family by their conjugates.  The
  ``f_*`` wrappers below expose the label-side indexing.

Relation per step kind: 'shl' -> horizontal strip, 'sqw' -> vertical strip
(on the arrow side), 'sg' -> containment.
"""

import itertools
from fractions import Fraction

import mpmath as mp

from .errors import AdmissibilityError, DegenerateVariables, InvalidPath, ParamOutOfRange
from .partitions import (
    EMPTY,
    Partition,
    partitions_of,
    partitions_of_containing,
    step_over,
    step_under,
)
from .qkernel import as_mp, is_exact, one_like, q_pochhammer
from .weights import (
    Spec,
    _cached,
    admissible,
    family,
    pi_factor,
    pi_is_rational,
)


def _profile(p, H):
    """(conjugate column heights c[0..H+1], multiplicities m[0..H]) of p."""
    c = [0] * (H + 2)
    for part in p:
        c[part] += 1
    for h in range(H, 0, -1):
        c[h - 1] += c[h]
    m = [c[h] - c[h + 1] for h in range(H + 1)]
    return c, m


def _lattice_row(bottom, top, fam, dual):
    """One-variable row between |bottom> and |top>.

    Vertex states are (m_h(bottom), J_{h-1}; m_h(top), J_h); the fluxes are
    J_h = top'_{h+1} - bottom'_{h+1} on up-right rows and the reverse on dual
    rows (where the larger diagram sits at the bottom).
    """
    H = max(top.part(1), bottom.part(1))
    ct, mt = _profile(top, H)
    cb, mb = _profile(bottom, H)
    sgn = -1 if dual else 1
    J0 = sgn * (ct[1] - cb[1])
    if J0 < 0:
        return Fraction(0)
    val = fam.bdry(J0)
    if val == 0:
        return val
    jprev = J0
    wfun = fam.w_dual if dual else fam.w
    for h in range(1, H + 1):
        j = sgn * (ct[h + 1] - cb[h + 1])
        if j < 0:
            return Fraction(0)
        val *= wfun(mb[h], jprev, mt[h], j)
        if val == 0:
            return val
        jprev = j
    return val


@_cached
def skew_step_F(nu, mu, spec, qp):
    """One-variable up-right row between |mu> (bottom) and |nu> (top)."""
    return _lattice_row(mu, nu, family(spec, qp), dual=False)


@_cached
def skew_step_G(nu, lam, spec, qp):
    """One-variable down-right row between |nu> (bottom) and |lam> (top)."""
    return _lattice_row(nu, lam, family(spec, qp), dual=True)


def _as_specs(specs):
    if isinstance(specs, Spec):
        return (specs,)
    return tuple(specs)


@_cached
def _skew_F_multi(nu, mu, specs, qp):
    if not specs:
        return Fraction(1) if nu == mu else Fraction(0)
    if len(specs) == 1:
        return skew_step_F(nu, mu, specs[0], qp)
    last, rest = specs[-1], specs[:-1]
    total = Fraction(0)
    for kappa in step_under(nu, last.kind):
        if not kappa.contains(mu):
            continue
        w1 = skew_step_F(nu, kappa, last, qp)
        if w1 == 0:
            continue
        total = total + w1 * _skew_F_multi(kappa, mu, rest, qp)
    return total


@_cached
def _skew_G_multi(nu, mu, specs, qp):
    if not specs:
        return Fraction(1) if nu == mu else Fraction(0)
    if len(specs) == 1:
        return skew_step_G(nu, mu, specs[0], qp)
    last, rest = specs[-1], specs[:-1]
    total = Fraction(0)
    for kappa in step_under(nu, last.kind):
        if not kappa.contains(mu):
            continue
        w1 = skew_step_G(nu, kappa, last, qp)
        if w1 == 0:
            continue
        total = total + w1 * _skew_G_multi(kappa, mu, rest, qp)
    return total


def skew_F(nu, mu, specs, qp):
    """Arrow-side skew function of the up-right family, any mix of specs."""
    return _skew_F_multi(nu, mu, _as_specs(specs), qp)


def skew_G(nu, mu, specs, qp):
    """Arrow-side skew function of the dual (down-right) family."""
    return _skew_G_multi(nu, mu, _as_specs(specs), qp)


def conj_prefactor(lam, qp):
    """c(lam) = prod_i (s^2;q)_{m_i} / (q;q)_{m_i} over part multiplicities."""
    q, s = qp
    val = one_like(q, s)
    for h in set(lam):
        m = lam.mult(h)
        val *= q_pochhammer(s * s, q, m) / q_pochhammer(q, q, m)
    return val


# ---------------------------------------------------------------------------
# label-side families
# ---------------------------------------------------------------------------


def f_shl_skew(lam, mu, specs, qp):
    """Skew spin Hall-Littlewood function; specs may mix 'shl' and 'sg'."""
    return skew_F(lam, mu, specs, qp)


def f_shl_dual_skew(lam, mu, specs, qp, route="conjugation"):
    """Dual skew spin Hall-Littlewood function.

    route='conjugation' computes c(lam)/c(mu) * F_{lam/mu};
    route='lattice' evaluates the dual-weight lattice directly.  The two must
    agree exactly.
    """
    if route == "lattice":
        return skew_G(lam, mu, specs, qp)
    return conj_prefactor(lam, qp) / conj_prefactor(mu, qp) * skew_F(lam, mu, specs, qp)


def f_sqw_skew(lam, mu, specs, qp):
    """Skew spin q-Whittaker polynomial, indexed by the conjugated diagrams."""
    return skew_F(lam.conjugate(), mu.conjugate(), specs, qp)


def f_sqw_dual_skew(lam, mu, specs, qp, route="conjugation"):
    if route == "lattice":
        return skew_G(lam.conjugate(), mu.conjugate(), specs, qp)
    lc, mc = lam.conjugate(), mu.conjugate()
    return conj_prefactor(lc, qp) / conj_prefactor(mc, qp) * skew_F(lc, mc, specs, qp)


def f_shl_symmetrized(lam, us, qp):
    """Symmetrization formula for the non-skew spin Hall-Littlewood function:

        F_lam(u_1..u_n) = (1-q)^n / (q;q)_{n-ell}
            * sum_{sigma} sigma{ prod_{i<j} (u_i - q u_j)/(u_i - u_j)
                                 * prod_i ((u_i - s)/(1 - s u_i))^{lam_i}
                                 * prod_{i<=ell} u_i/(u_i - s) },

    an independent oracle for the lattice route (n >= ell, u_i distinct).
    """
    q, s = qp
    us = list(us)
    n, ell = len(us), lam.ell
    if n < ell:
        raise ParamOutOfRange("need at least ell(lam) variables")
    if len({*us}) != n:
        raise DegenerateVariables("coinciding variables in the symmetrized sum")
    total = 0 * one_like(q, s, *us)
    for perm in itertools.permutations(range(n)):
        v = [us[p] for p in perm]
        term = one_like(q, s, *us)
        for i in range(n):
            for j in range(i + 1, n):
                term *= (v[i] - q * v[j]) / (v[i] - v[j])
        for i in range(n):
            li = lam.part(i + 1)
            if li:
                term *= ((v[i] - s) / (1 - s * v[i])) ** li
        for i in range(ell):
            term *= v[i] / (v[i] - s)
        total += term
    return total * (1 - q) ** n / q_pochhammer(q, q, n - ell)


def fused_F(lam, mu, us, qJs, qp):
    """Skew function with fused rows of parameters (u_k, qJ_k)."""
    from .weights import fused

    specs = tuple(fused(u, qJ) for u, qJ in zip(us, qJs))
    return skew_F(lam, mu, specs, qp)


def fused_G(lam, mu, vs, qIs, qp):
    from .weights import fused

    specs = tuple(fused(v, qI) for v, qI in zip(vs, qIs))
    return skew_G(lam, mu, specs, qp)


# ---------------------------------------------------------------------------
# skew Cauchy identities
# ---------------------------------------------------------------------------


def _lhs_candidates(lam, mu, kind_f, kind_g, size):
    """Partitions nu of given size that could carry mass in the summed side."""
    cap1 = None
    capl = None
    if kind_f == "shl":
        capl = mu.ell + 1
    elif kind_f == "sqw":
        cap1 = mu.part(1) + 1
    if kind_g == "shl":
        capl = lam.ell + 1 if capl is None else min(capl, lam.ell + 1)
    elif kind_g == "sqw":
        c = lam.part(1) + 1
        cap1 = c if cap1 is None else min(cap1, c)
    cap1 = size if cap1 is None else cap1
    capl = size if capl is None else capl
    join = Partition(
        [max(lam.part(i + 1), mu.part(i + 1)) for i in range(max(lam.ell, mu.ell))]
    )
    return partitions_of_containing(size, join, max_part=cap1, max_length=capl)


def cauchy_check(spec_f, spec_g, lam, mu, qp, shell_tol=None, max_size=400):
    """Residual of the one-variable skew Cauchy identity for a spec pair.

    Computes  sum_nu F_{nu/mu}(f) G_{nu/lam}(g)
            - Pi(f;g) sum_kappa F_{lam/kappa}(f) G_{mu/kappa}(g).

    The kappa sum is finite.  The nu sum is enumerated in shells of constant
    |nu| until a shell's total absolute mass drops below ``shell_tol``
    (default 10^-(dps-10)); the last shell mass is reported as a tail proxy.
    For pairs whose nu-support is finite the residual is exact.

    Returns (residual, report dict).
    """
    if not admissible(spec_f, spec_g, qp):
        raise AdmissibilityError(f"({spec_f}, {spec_g}) outside the convergence region")
    # right-hand side: kappa below both lam and mu
    rhs = Fraction(0)
    for kappa in step_under(lam, spec_f.kind):
        if not mu.contains(kappa):
            continue
        a = skew_step_F(lam, kappa, spec_f, qp)
        if a == 0:
            continue
        b = skew_step_G(mu, kappa, spec_g, qp)
        if b == 0:
            continue
        rhs = rhs + a * b
    finite = {spec_f.kind, spec_g.kind} == {"shl", "sqw"}
    exact_mode = is_exact(spec_f.x, spec_g.x, qp.q, qp.s) and pi_is_rational(spec_f, spec_g)
    pi = pi_factor(spec_f, spec_g, qp, mode="auto")
    shell_tol = (
        mp.mpf(10) ** (-(mp.mp.dps - 10)) if shell_tol is None else shell_tol
    )
    join_size = sum(max(lam.part(i + 1), mu.part(i + 1)) for i in range(max(lam.ell, mu.ell)))
    lhs = Fraction(0) if exact_mode else mp.mpf(0)
    last_shell = None
    small_shells = 0
    size = join_size
    while True:
        shell = Fraction(0) if exact_mode else mp.mpf(0)
        shell_abs = mp.mpf(0)
        for nu in _lhs_candidates(lam, mu, spec_f.kind, spec_g.kind, size):
            a = skew_step_F(nu, mu, spec_f, qp)
            if a == 0:
                continue
            b = skew_step_G(nu, lam, spec_g, qp)
            if b == 0:
                continue
            term = a * b
            shell = shell + term
            shell_abs += abs(as_mp(term))
        lhs = lhs + shell
        last_shell = shell_abs
        small_shells = small_shells + 1 if shell_abs < shell_tol else 0
        size += 1
        if finite and size > lam.size + mu.size + 2:
            break
        if not finite and small_shells >= 2:
            break
        if size - join_size > max_size:
            raise AdmissibilityError("Cauchy summation failed to converge")
    if exact_mode and finite:
        residual = lhs - pi * rhs
    else:
        residual = as_mp(lhs) - as_mp(pi) * as_mp(rhs)
    report = {
        "finite": finite,
        "exact": exact_mode and finite,
        "last_shell_mass": last_shell,
        "max_size": size - 1,
        "pi": pi,
    }
    return residual, report


# ---------------------------------------------------------------------------
# measures on Young diagrams
# ---------------------------------------------------------------------------


def pi_product(row_specs, col_specs, qp, mode="auto"):
    """prod over all (row, column) spec pairs of Pi(row; column)."""
    val = None
    for f in row_specs:
        for g in col_specs:
            p = pi_factor(f, g, qp, mode=mode)
            val = p if val is None else val * p
    return val if val is not None else Fraction(1)


def check_all_admissible(row_specs, col_specs, qp):
    for f in row_specs:
        for g in col_specs:
            if not admissible(f, g, qp):
                raise AdmissibilityError(f"pair ({f}, {g}) not admissible")


def skew_F_table(specs, qp, max_part, max_length):
    """F_nu(specs) for every nu reachable inside the given box, by forward DP."""
    table = {EMPTY: Fraction(1)}
    for spec in specs:
        new = {}
        for kappa, val in table.items():
            for nu in step_over(kappa, spec.kind, max_part, max_length):
                w1 = skew_step_F(nu, kappa, spec, qp)
                if w1 == 0:
                    continue
                new[nu] = new.get(nu, Fraction(0)) + val * w1
        table = new
    return table


def skew_G_table(specs, qp, max_part, max_length):
    table = {EMPTY: Fraction(1)}
    for spec in specs:
        new = {}
        for kappa, val in table.items():
            for nu in step_over(kappa, spec.kind, max_part, max_length):
                w1 = skew_step_G(nu, kappa, spec, qp)
                if w1 == 0:
                    continue
                new[nu] = new.get(nu, Fraction(0)) + val * w1
        table = new
    return table


def cauchy_measure_table(row_specs, col_specs, qp, max_part, max_length,
                         max_size=None, mode="auto"):
    """The normalized measure P(nu) = F_nu(rows) G_nu(columns) / Z on a box.

    Returns (dict nu -> probability, defect) where defect = 1 - sum is the
    exactly-known truncation loss outside the box.  Spec lists containing
    scaled-geometric entries grow diagrams by containment, so their support
    is enumerated per diagram under a size cap (default: max_part *
    max_length would be astronomical; pass max_size explicitly instead).
    """
    check_all_admissible(row_specs, col_specs, qp)
    z = pi_product(row_specs, col_specs, qp, mode=mode)
    has_sg = any(sp.kind in ("sg", "fused") for sp in list(row_specs) + list(col_specs))
    if has_sg or max_size is not None:
        if max_size is None:
            raise ParamOutOfRange(
                "scaled-geometric spec lists need an explicit size cap"
            )
        rows = tuple(row_specs)
        cols = tuple(col_specs)
        out = {}
        exact = is_exact(z, qp.q, qp.s)
        total = Fraction(0) if exact else mp.mpf(0)
        for n in range(0, max_size + 1):
            for nu in partitions_of(n, max_part=max_part, max_length=max_length):
                a = skew_F(nu, EMPTY, rows, qp)
                if a == 0:
                    continue
                b = skew_G(nu, EMPTY, cols, qp)
                if b == 0:
                    continue
                p = a * b / z if exact else as_mp(a) * as_mp(b) / as_mp(z)
                out[nu] = p
                total = total + p
        return out, 1 - total
    tf = skew_F_table(tuple(row_specs), qp, max_part, max_length)
    tg = skew_G_table(tuple(col_specs), qp, max_part, max_length)
    exact = is_exact(z) and all(is_exact(v) for v in tf.values())
    out = {}
    total = Fraction(0) if exact else mp.mpf(0)
    for nu, a in tf.items():
        b = tg.get(nu)
        if b is None or a == 0 or b == 0:
            continue
        p = a * b / z if exact else as_mp(a) * as_mp(b) / as_mp(z)
        out[nu] = p
        total = total + p
    return out, 1 - total


def cauchy_measure_prob(nu, row_specs, col_specs, qp, mode="auto"):
    """Probability of one diagram under the normalized two-sided measure."""
    check_all_admissible(row_specs, col_specs, qp)
    a = skew_F(nu, EMPTY, tuple(row_specs), qp)
    b = skew_G(nu, EMPTY, tuple(col_specs), qp)
    z = pi_product(row_specs, col_specs, qp, mode=mode)
    if is_exact(a, b) and is_exact(z):
        return a * b / z
    return as_mp(a) * as_mp(b) / as_mp(z)


def length_law(row_specs, col_specs, qp, max_part, max_length, max_size=None):
    """Law of ell(nu) under the measure, with its truncation defect."""
    table, defect = cauchy_measure_table(
        row_specs, col_specs, qp, max_part, max_length, max_size=max_size
    )
    law = {}
    for nu, p in table.items():
        law[nu.ell] = law.get(nu.ell, 0) + p
    return law, defect


# ---------------------------------------------------------------------------
# down-right path processes
# ---------------------------------------------------------------------------


def validate_path(path):
    """A down-right path starts on the y-axis, ends on the x-axis, and moves
    by (0,-1) or (+1,0)."""
    if not path or path[0][0] != 0 or path[-1][1] != 0:
        raise InvalidPath("path must start at x=0 and end at y=0")
    for (x1, y1), (x2, y2) in zip(path, path[1:]):
        if (x2 - x1, y2 - y1) not in ((0, -1), (1, 0)):
            raise InvalidPath(f"illegal step {(x1, y1)} -> {(x2, y2)}")


def path_process_weight(path, assignment, row_specs, col_specs, qp, mode="auto"):
    """Normalized weight of a diagram assignment along a down-right path.

    row_specs[y-1] is the spec of lattice row y, col_specs[x-1] of column x;
    step boundary (empty diagrams on the axes) is assumed.  The weight is

        prod_{down steps} F_{lam(x_i,y_i)/lam(x_{i+1},y_{i+1})}(row y_i)
      * prod_{right steps} G_{lam(x_{i+1},y_{i+1})/lam(x_i,y_i)}(col x_{i+1})
      / Z,   Z = prod_{cells below the path} Pi(row; column).
    """
    validate_path(path)
    val = Fraction(1)
    for (x1, y1), (x2, y2) in zip(path, path[1:]):
        a = assignment[(x1, y1)]
        b = assignment[(x2, y2)]
        if y2 == y1 - 1:
            val *= skew_step_F(a, b, row_specs[y1 - 1], qp)
        else:
            val *= skew_step_G(b, a, col_specs[x2 - 1], qp)
        if val == 0:
            return val
    z = Fraction(1)
    for (x1, y1), (x2, y2) in zip(path, path[1:]):
        if x2 == x1 + 1:
            for y in range(1, y1 + 1):
                p = pi_factor(row_specs[y - 1], col_specs[x2 - 1], qp, mode=mode)
                z = z * p
    if is_exact(val) and is_exact(z):
        return val / z
    return as_mp(val) / as_mp(z)
