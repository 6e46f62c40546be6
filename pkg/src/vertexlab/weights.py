"""Vertex-weight families: fused row weights, their duals, cross weights,
left-boundary weights, and the stochastic model weights built from them.

Everything is generated from one master object, the fused row weight
``w(u, qJ)`` whose horizontal multiplicities are unbounded and whose fusion
level enters only through the independent scalar ``qJ``; all named families are
specializations:

    spin Hall-Littlewood row ... qJ = q (level 1), at most one horizontal arrow;
    spin q-Whittaker row ....... u = s, qJ = -xi/s  (factorizes);
    scaled geometric row ....... the limit u = -alpha*eps, qJ = 1/eps, eps -> 0,
                                 implemented by its closed form.

Dual (down-right) weights are the conjugation
``w*(i1,j1;i2,j2) = c(i1,i2) w(i2,j1;i1,j2)``.  Cross weights follow the same
pattern with scaled-geometric limits implemented in closed form.  All finite
formulas are rational, so exact arithmetic survives end to end.
"""

from dataclasses import dataclass

import mpmath as mp

from .errors import ModeError, ParamOutOfRange, UnsupportedPair
from .qkernel import QParams, as_mp, is_exact, one_like, q_pochhammer, q_pochhammer_inf

# ---------------------------------------------------------------------------
# spectral specializations
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Spec:
    """A tagged spectral specialization attached to one lattice row/column.

    kind 'shl' carries u, 'sqw' carries xi (or theta on dual rows), 'sg'
    carries alpha (or beta), 'fused' carries the pair (u, qJ) as independent
    scalars plus an optional integer level.
    """

    kind: str
    x: object = None
    qJ: object = None
    level: object = None  # integer fusion level when meaningful

    def __post_init__(self):
        if self.kind not in ("shl", "sqw", "sg", "fused"):
            raise ParamOutOfRange(f"unknown spec kind {self.kind!r}")

    def fused_coords(self, qp):
        """(u, qJ, integer level or None); undefined for 'sg'."""
        q, s = qp
        if self.kind == "shl":
            return self.x, q, 1
        if self.kind == "sqw":
            return s, -self.x / s, None
        if self.kind == "fused":
            return self.x, self.qJ, self.level
        raise ParamOutOfRange("scaled geometric spec has no finite fused coordinates")

    def in_nonneg_box(self, qp):
        """Membership in the nonnegativity box of this specialization."""
        q, s = qp
        if self.kind == "shl":
            return 0 <= self.x <= 1
        if self.kind == "sqw":
            return -s <= self.x <= -1 / s
        if self.kind == "sg":
            return 0 <= self.x <= -1 / s
        return False


def shl(u):
    return Spec("shl", u)


def sqw(xi):
    return Spec("sqw", xi)


def sg(alpha):
    return Spec("sg", alpha)


def fused(u, qJ, level=None):
    return Spec("fused", u, qJ, level)


# ---------------------------------------------------------------------------
# a tiny cache keyed by precision (mp results change when mp.prec changes)
# ---------------------------------------------------------------------------

_caches = []


def _cached(fn):
    table = {}
    _caches.append(table)

    def wrapper(*args):
        key = (mp.mp.prec, args)
        try:
            return table[key]
        except KeyError:
            table[key] = val = fn(*args)
            return val

    wrapper.__name__ = fn.__name__
    wrapper.__doc__ = fn.__doc__
    return wrapper


def clear_caches():
    for t in _caches:
        t.clear()
    _family_cache.clear()
    _cross_cache.clear()


qpoch = _cached(q_pochhammer)


def _suffix_poch(x, q, n):
    """g[k] = (x q^k; q)_{n-k} for k = 0..n, built by multiplication only."""
    one = one_like(x, q)
    g = [one] * (n + 1)
    for k in range(n - 1, -1, -1):
        g[k] = (1 - x * q ** k) * g[k + 1]
    return g


# ---------------------------------------------------------------------------
# fused row weight and its specializations
# ---------------------------------------------------------------------------


@_cached
def w_fused_raw(u, qJ, q, s, i1, j1, i2, j2):
    """Fused row weight at one vertex, horizontal occupancies unbounded.

    Vanishes unless i1 + j1 = i2 + j2.  Rational in all five parameters
    (u, qJ, q, s) and exact for exact inputs.  The terminating regularized
    4-phi-3 sum is inlined with incremental Pochhammers.
    """
    if min(i1, j1, i2, j2) < 0 or i1 + j1 != i2 + j2:
        return 0 * one_like(u, qJ, q, s)
    one = one_like(u, qJ, q, s)
    if u == 0:
        # u -> 0 limit: u^{i1} cancels against (qs/u;q)_j, leaving only the
        # top term j = i1 of the series
        if i1 > i2:
            return 0 * one
        e = i1 * (i1 - 1) // 2 + i1 * j1
        pref = (-1) ** (i1 + j2) * q ** e * s ** (j2 - i1)
        pref *= qpoch(q, q, j1) / (qpoch(q, q, i1) * qpoch(q, q, j2))
        top = (
            q ** i1
            * qpoch(q ** (-i1) if i1 else one, q, i1)
            / qpoch(q, q, i1)
            * qpoch(q ** (-i2) if i2 else one, q, i1)
            * (-q * s) ** i1
            * q ** (i1 * (i1 - 1) // 2)
        )
        return pref * top
    den = qpoch(q, q, i1) * qpoch(q, q, j2) * qpoch(s * u, q, j1 + i1)
    if den == 0:
        raise ZeroDivisionError("pole in fused row weight prefactor")
    e = i1 * (i1 - 1) // 2 + i1 * j1
    pref = (-1) ** (i1 + j2) * q ** e * s ** (j2 - i1) * u ** i1
    pref = pref * qpoch(u / s, q, j1 - i2) * qpoch(q, q, j1) / den
    # regularized 4-phi-3 with n = i1
    n = i1
    aa = (q ** (-i2) if i2 else one, s * u * qJ, q * s / u)
    bb = (s * s, q ** (1 + j2 - i1), q ** (1 - i2 - j2) * qJ)
    total = 0 * one
    coeff = one
    afac = [one, one, one]
    qj = one
    qmn = q ** (-n) if n else one
    suffix = []
    for b in bb:
        g = [one] * (n + 1)
        for j in range(n - 1, -1, -1):
            g[j] = (1 - b * q ** j) * g[j + 1]
        suffix.append(g)
    for j in range(n + 1):
        term = coeff * afac[0] * afac[1] * afac[2]
        term = term * suffix[0][j] * suffix[1][j] * suffix[2][j]
        total += term
        if j < n:
            coeff = coeff * q * (1 - qmn * qj) / (1 - q * qj)
            for i in range(3):
                afac[i] = afac[i] * (1 - aa[i] * qj)
            qj *= q
    return pref * total


@_cached
def w_sg_raw(alpha, q, s, i1, j1, i2, j2):
    """Scaled-geometric row weight: the eps -> 0 limit of the fused weight at
    u = -alpha*eps, qJ = 1/eps, written so that alpha = 0 is regular."""
    if min(i1, j1, i2, j2) < 0 or i1 + j1 != i2 + j2:
        return 0 * one_like(alpha, q, s)
    one = one_like(alpha, q, s)
    base = (
        (-1) ** (i1 + j2)
        * s ** (j2 - i1)
        * qpoch(q, q, j1)
        / (qpoch(q, q, i1) * qpoch(q, q, j2))
    )
    # k-sum of the terminating series with the alpha powers merged in, so that
    # no negative power of alpha appears (alpha = 0 keeps only k = i1)
    n = i1
    g1 = _suffix_poch(s * s, q, n)
    g2 = _suffix_poch(q ** (1 + j2 - i1), q, n)
    qmi1 = q ** (-i1) if i1 else one
    qmi2 = q ** (-i2) if i2 else one
    zfac = -s * q ** (1 + i2 + j2)
    if alpha == 0:
        if i1 > i2:
            return 0 * one
        top = zfac ** i1 * qpoch(qmi1, q, i1) / qpoch(q, q, i1) * qpoch(qmi2, q, i1)
        return base * top * g1[i1] * g2[i1]
    total = 0 * one
    coeff = alpha ** i1
    qk = one
    for k in range(0, min(i1, i2) + 1):
        total += coeff * g1[k] * g2[k]
        if k < min(i1, i2):
            coeff = (
                coeff / alpha * zfac
                * (1 - qmi1 * qk) / (1 - q * qk)
                * (1 - qmi2 * qk)
                * (1 + s * alpha * qk)
            )
            qk *= q
    return base * total


@_cached
def conj_factor(q, s, i1, i2):
    """(s^2;q)_{i1} (q;q)_{i2} / ((q;q)_{i1} (s^2;q)_{i2}), the dual conjugation."""
    return (
        qpoch(s * s, q, i1)
        * qpoch(q, q, i2)
        / (qpoch(q, q, i1) * qpoch(s * s, q, i2))
    )


def w_fused(spec, qp, state):
    """Row weight w for a spec on an up-right row; zero off conservation.

    Integer fusion levels cap the horizontal occupancies (at most ``level``
    arrows per horizontal edge).
    """
    q, s = qp
    i1, j1, i2, j2 = state
    if spec.kind == "sg":
        return w_sg_raw(spec.x, q, s, i1, j1, i2, j2)
    u, qJ, level = spec.fused_coords(qp)
    if level is not None and (j1 > level or j2 > level):
        return 0 * one_like(u, q, s)
    return w_fused_raw(u, qJ, q, s, i1, j1, i2, j2)


def w_dual_fused(spec, qp, state):
    """Dual (down-right) row weight w*: conjugation of w with i-slots swapped."""
    q, s = qp
    i1, j1, i2, j2 = state
    base = w_fused(spec, qp, (i2, j1, i1, j2))
    if base == 0:
        return base
    return conj_factor(q, s, i1, i2) * base


def boundary_weight(spec, qp, k):
    """Left-boundary weight: the column-0 vertex emitting k arrows rightward.

    Fused: (-u qJ)^k (1/qJ; q)_k / (q;q)_k;  reduces to u^k (k <= 1) on a
    level-1 row, to xi^k (-s/xi;q)_k/(q;q)_k on a spin q-Whittaker row, and to
    alpha^k/(q;q)_k on a scaled geometric row.
    """
    q, s = qp
    if k < 0:
        return 0 * one_like(q, s)
    if spec.kind == "sg":
        return spec.x ** k / qpoch(q, q, k)
    u, qJ, level = spec.fused_coords(qp)
    if level is not None and k > level:
        return 0 * one_like(u, q)
    return (
        (-u * qJ) ** k
        * qpoch(1 / qJ, q, k)
        / qpoch(q, q, k)
    )


def w_sqw_direct(xi, qp, state):
    """Independent closed form of the spin q-Whittaker row weight.

    W(i1,j1;i2,j2) = [i1+j1=i2+j2][i1 >= j2] xi^{j2}
        (-s/xi;q)_{j2} (-s xi;q)_{i1-j2} (q;q)_{i2}
        / ((q;q)_{j2} (q;q)_{i1-j2} (s^2;q)_{i2}).

    Used as an oracle against the fused reduction u = s, qJ = -xi/s.
    """
    q, s = qp
    i1, j1, i2, j2 = state
    if min(i1, j1, i2, j2) < 0 or i1 + j1 != i2 + j2 or i1 < j2:
        return 0 * one_like(xi, q, s)
    return (
        xi ** j2
        * q_pochhammer(-s / xi, q, j2)
        * q_pochhammer(-s * xi, q, i1 - j2)
        * q_pochhammer(q, q, i2)
        / (
            q_pochhammer(q, q, j2)
            * q_pochhammer(q, q, i1 - j2)
            * q_pochhammer(s * s, q, i2)
        )
    )


def w_sqw(xi, qp, state):
    """Spin q-Whittaker row weight (via its exact fused coordinates)."""
    return w_fused(sqw(xi), qp, state)


def w_sqw_dual(theta, qp, state):
    return w_dual_fused(sqw(theta), qp, state)


def w_sg(alpha, qp, state):
    return w_fused(sg(alpha), qp, state)


def w_sg_dual(beta, qp, state):
    return w_dual_fused(sg(beta), qp, state)


# ---------------------------------------------------------------------------
# cross weights
# ---------------------------------------------------------------------------


@_cached
def cross_R_fused_raw(z, qI, qJ, q, i1, j1, i2, j2):
    """General fused cross weight; slots (1,3) sit on the qJ line, (2,4) on qI.

    Vanishes unless i2 + j1 = i1 + j2.  Rational in (z, qI, qJ, q).
    """
    if min(i1, j1, i2, j2) < 0 or i2 + j1 != i1 + j2:
        return 0 * one_like(z, q)
    one = one_like(z, qI, qJ, q)
    den0 = qpoch(z, q, j1 + i2) * qpoch(q, q, j2) * qpoch(q, q, i2)
    if den0 == 0:
        raise ZeroDivisionError("pole in cross weight prefactor")
    e = i2 * i1 + j2 * (j2 - 1) // 2
    pref = q ** e * (-z * qJ) ** j2 * qpoch(q, q, j1) / den0
    n = i2
    x = q / (z * qJ)
    dd = i1 - j1
    aa = (q ** (-i1) if i1 else one, z * qI)
    bb = (1 / qJ, q ** (1 + j2 - i2), q ** (1 - i1 - j2) * qI)
    suffix = []
    for b in bb:
        g = [one] * (n + 1)
        for j in range(n - 1, -1, -1):
            g[j] = (1 - b * q ** j) * g[j + 1]
        suffix.append(g)
    if x == 1 and dd > 0:
        # boundary degeneration: the (x;q)_j series factor and the prefactor
        # denominator (x;q)_{dd} vanish together; the finite limit keeps the
        # j >= 1 terms with ratio (q;q)_{j-1}/(q;q)_{dd-1}, provided the j = 0
        # term carries its own zero
        if suffix[0][0] * suffix[1][0] * suffix[2][0] != 0:
            raise ZeroDivisionError("genuine pole of the cross weight")
        total = 0 * one
        coeff = one
        afac = [one, one]
        qj = one
        qmn = q ** (-n) if n else one
        for j in range(n + 1):
            if j >= 1:
                total += (
                    coeff
                    * afac[0]
                    * afac[1]
                    * qpoch(q, q, j - 1)
                    * suffix[0][j]
                    * suffix[1][j]
                    * suffix[2][j]
                )
            if j < n:
                coeff = coeff * q * (1 - qmn * qj) / (1 - q * qj)
                afac[0] *= 1 - aa[0] * qj
                afac[1] *= 1 - aa[1] * qj
                qj *= q
        return pref * total / qpoch(q, q, dd - 1)
    denx = qpoch(x, q, dd)
    if denx == 0:
        raise ZeroDivisionError("pole in cross weight prefactor")
    total = 0 * one
    coeff = one
    afac = [one, one, one]
    qj = one
    qmn = q ** (-n) if n else one
    for j in range(n + 1):
        total += coeff * afac[0] * afac[1] * afac[2] * suffix[0][j] * suffix[1][j] * suffix[2][j]
        if j < n:
            coeff = coeff * q * (1 - qmn * qj) / (1 - q * qj)
            afac[0] *= 1 - aa[0] * qj
            afac[1] *= 1 - aa[1] * qj
            afac[2] *= 1 - x * qj
            qj *= q
    return pref * total / denx


@_cached
def cross_R_sg_raw(u, qJ, beta, q, i1, j1, i2, j2):
    """Cross weight with the qI line taken scaled geometric (parameter beta),
    the qJ line untouched.  Written so that beta = 0 is regular."""
    if min(i1, j1, i2, j2) < 0 or i2 + j1 != i1 + j2:
        return 0 * one_like(u, q)
    one = one_like(u, qJ, beta, q)
    qmJ = 1 / qJ
    den = qpoch(q, q, i2) * qpoch(qmJ, q, i1)
    if den == 0:
        raise ZeroDivisionError("pole in scaled-geometric cross weight")
    base = (-1) ** i2 * qpoch(qmJ, q, i2) / den
    n = i1
    g1 = _suffix_poch(qmJ, q, n)
    g2 = _suffix_poch(q ** (1 + j2 - i2), q, n)
    qmi1 = q ** (-i1) if i1 else one
    qmi2 = q ** (-i2) if i2 else one
    zfac = -q ** (1 + i1 + j2)
    ub = u * qJ * beta
    if ub == 0:
        if i2 > i1:
            return 0 * one
        top = zfac ** i2 * qpoch(qmi1, q, i2) / qpoch(q, q, i2) * qpoch(qmi2, q, i2)
        return base * top * g1[i2] * g2[i2]
    total = 0 * one
    coeff = ub ** i2
    qk = one
    for k in range(0, min(i1, i2) + 1):
        total += coeff * g1[k] * g2[k]
        if k < min(i1, i2):
            coeff = (
                coeff / ub * zfac
                * (1 - qmi1 * qk) / (1 - q * qk)
                * (1 - qmi2 * qk)
                * (1 + u * beta * qk)
            )
            qk *= q
    return base * total


@_cached
def cross_R_sg_sg_raw(alpha, beta, q, i1, j1, i2, j2):
    """Cross weight with both lines scaled geometric (alpha on qJ, beta on qI)."""
    if min(i1, j1, i2, j2) < 0 or i2 + j1 != i1 + j2:
        return 0 * one_like(alpha, q)
    one = one_like(alpha, beta, q)
    n = j1
    g = _suffix_poch(q ** (1 + i1 - j1), q, n)
    qmj1 = q ** (-j1) if j1 else one
    qmj2 = q ** (-j2) if j2 else one
    zfac = q ** (1 + j1 + i2)
    ab = alpha * beta
    if ab == 0:
        if j2 > j1:
            return 0 * one
        top = zfac ** j2 * qpoch(qmj1, q, j2) / qpoch(q, q, j2) * qpoch(qmj2, q, j2)
        return top * g[j2] / qpoch(q, q, j2)
    total = 0 * one
    coeff = ab ** j2
    qk = one
    for k in range(0, min(j1, j2) + 1):
        total += coeff * g[k]
        if k < min(j1, j2):
            coeff = coeff / ab * zfac * (1 - qmj1 * qk) / (1 - q * qk) * (1 - qmj2 * qk)
            qk *= q
    return total / qpoch(q, q, j2)


@_cached
def cross_R_sqw_sg_raw(alpha, theta, q, s, i1, j1, i2, j2):
    """Cross weight with the qJ line scaled geometric (alpha) and the qI line
    spin q-Whittaker (theta); slots (2,4) live on the qI line."""
    if min(i1, j1, i2, j2) < 0 or i2 + j1 != i1 + j2:
        return 0 * one_like(alpha, q)
    one = one_like(alpha, theta, q, s)
    den = qpoch(-s / theta, q, j1)
    if den == 0:
        raise ZeroDivisionError("pole in sqW/sg cross weight")
    base = qpoch(-s / theta, q, j2) / (qpoch(q, q, j2) * den)
    n = j1
    g1 = _suffix_poch(-s / theta, q, n)
    g2 = _suffix_poch(q ** (1 + i1 - j1), q, n)
    qmj1 = q ** (-j1) if j1 else one
    qmj2 = q ** (-j2) if j2 else one
    zfac = q ** (1 + j1 + i2)
    at = alpha * theta
    if at == 0:
        if j2 > j1:
            return 0 * one
        top = zfac ** j2 * qpoch(qmj1, q, j2) / qpoch(q, q, j2) * qpoch(qmj2, q, j2)
        return base * top * g1[j2] * g2[j2]
    total = 0 * one
    coeff = at ** j2
    qk = one
    for k in range(0, min(j1, j2) + 1):
        total += coeff * g1[k] * g2[k]
        if k < min(j1, j2):
            coeff = (
                coeff / at * zfac
                * (1 - qmj1 * qk) / (1 - q * qk)
                * (1 - qmj2 * qk)
                * (1 + s * alpha * qk)
            )
            qk *= q
    return base * total


class RowFamily:
    """Evaluators for one spec at fixed (q, s), memoized on integer states.

    Spec parameters are hashed once at construction; the per-vertex lookups
    afterwards only hash small integer tuples, which keeps lattice sweeps
    cheap.
    """

    __slots__ = ("spec", "qp", "level", "_w", "_wd", "_b")

    def __init__(self, spec, qp):
        self.spec = spec
        self.qp = qp
        self.level = _level_of(spec, qp)
        self._w = {}
        self._wd = {}
        self._b = {}

    def w(self, i1, j1, i2, j2):
        key = (i1, j1, i2, j2)
        v = self._w.get(key)
        if v is None:
            v = self._w[key] = w_fused(self.spec, self.qp, key)
        return v

    def w_dual(self, i1, j1, i2, j2):
        key = (i1, j1, i2, j2)
        v = self._wd.get(key)
        if v is None:
            v = self._wd[key] = w_dual_fused(self.spec, self.qp, key)
        return v

    def bdry(self, k):
        v = self._b.get(k)
        if v is None:
            v = self._b[k] = boundary_weight(self.spec, self.qp, k)
        return v


class CrossFamily:
    """Memoized cross-weight evaluator for one ordered spec pair."""

    __slots__ = ("spec_f", "spec_g", "qp", "_r")

    def __init__(self, spec_f, spec_g, qp):
        self.spec_f = spec_f
        self.spec_g = spec_g
        self.qp = qp
        self._r = {}

    def R(self, a, b, c, d):
        key = (a, b, c, d)
        v = self._r.get(key)
        if v is None:
            v = self._r[key] = cross_R(self.spec_f, self.spec_g, self.qp, key)
        return v


_family_cache = {}


def family(spec, qp):
    key = (mp.mp.prec, spec, qp)
    fam = _family_cache.get(key)
    if fam is None:
        fam = _family_cache[key] = RowFamily(spec, qp)
    return fam


_cross_cache = {}


def cross_family(spec_f, spec_g, qp):
    key = (mp.mp.prec, spec_f, spec_g, qp)
    fam = _cross_cache.get(key)
    if fam is None:
        fam = _cross_cache[key] = CrossFamily(spec_f, spec_g, qp)
    return fam


def cross_R(spec_f, spec_g, qp, state):
    """Cross weight for the pair (row spec, column spec).

    Slot convention: R(a, b; c, d) has a, c on the row (qJ) line and b, d on
    the column (qI) line, with conservation c + b = a + d.  Scaled geometric
    sides are served by their closed-form limits; every other pair evaluates
    the general fused formula at the pair's exact coordinates.
    """
    q, s = qp
    a, b, c, d = state
    if min(a, b, c, d) < 0 or c + b != a + d:
        return 0 * one_like(q, s)
    f_sg = spec_f.kind == "sg"
    g_sg = spec_g.kind == "sg"
    if not f_sg and not g_sg:
        u, qJ, levJ = spec_f.fused_coords(qp)
        v, qI, levI = spec_g.fused_coords(qp)
        if levJ is not None and max(a, c) > levJ:
            return 0 * one_like(q, s)
        if levI is not None and max(b, d) > levI:
            return 0 * one_like(q, s)
        return cross_R_fused_raw(u * v, qI, qJ, q, a, b, c, d)
    if f_sg and g_sg:
        return cross_R_sg_sg_raw(spec_f.x, spec_g.x, q, a, b, c, d)
    if g_sg and spec_f.kind == "sqw":
        # transpose of the sg/sqW case: swap the two lines of the cross
        return cross_R_sqw_sg_raw(spec_g.x, spec_f.x, q, s, b, a, d, c)
    if g_sg:
        u, qJ, levJ = spec_f.fused_coords(qp)
        if levJ is not None and max(a, c) > levJ:
            return 0 * one_like(q, s)
        return cross_R_sg_raw(u, qJ, spec_g.x, q, a, b, c, d)
    if f_sg and spec_g.kind == "sqw":
        return cross_R_sqw_sg_raw(spec_f.x, spec_g.x, q, s, a, b, c, d)
    if f_sg:
        v, qI, levI = spec_g.fused_coords(qp)
        if levI is not None and max(b, d) > levI:
            return 0 * one_like(q, s)
        return cross_R_sg_raw(v, qI, spec_f.x, q, b, a, d, c)
    raise UnsupportedPair(f"({spec_f.kind}, {spec_g.kind})")


def cross_R_sqw_sqw_direct(xi, theta, qp, state):
    """Independent closed form of the sqW/sqW cross weight (test oracle)."""
    q, s = qp
    i1, j1, i2, j2 = state
    if min(i1, j1, i2, j2) < 0 or i2 + j1 != i1 + j2:
        return 0 * one_like(q, s)
    one = one_like(xi, theta, q, s)
    den = (
        q_pochhammer(s * s, q, j1 + i2)
        * q_pochhammer(q, q, j2)
        * q_pochhammer(q, q, i2)
        * q_pochhammer(-q / (s * xi), q, i1 - j1)
    )
    if den == 0:
        raise ZeroDivisionError("pole in sqW/sqW cross weight")
    e = i2 * i1 + j2 * (j2 - 1) // 2
    pref = q ** e * (s * xi) ** j2 * q_pochhammer(q, q, j1) / den
    aa = (q ** (-i1) if i1 else one, -s * theta, -q / (s * xi))
    bb = (-s / xi, q ** (1 + j2 - i2), -theta / s * q ** (1 - i1 - j2))
    from .qkernel import reg_qhyper

    return pref * reg_qhyper(i2, list(aa), list(bb), q, q)


# ---------------------------------------------------------------------------
# normalization constants Pi (= the weight of the untouched cross)
# ---------------------------------------------------------------------------


def pi_is_rational(spec_f, spec_g):
    """True when Pi(row; column) is a rational function of the parameters."""
    return "shl" in (spec_f.kind, spec_g.kind)


def pi_factor(spec_f, spec_g, qp, mode="auto"):
    """The one-cell normalization Pi(row spec; column spec).

    shl/shl: (1-q u v)/(1-u v);  shl/sqw: (1+u theta)/(1-s u);
    sqw/sqw: (-s xi;q)_oo (-s theta;q)_oo / ((s^2;q)_oo (xi theta;q)_oo);
    sg pairs: 1 + alpha v,  (-s alpha;q)_oo / (alpha theta;q)_oo,
    1/(alpha beta;q)_oo.   Rational cases stay exact; the rest are apfloat.
    """
    q, s = qp
    kinds = (spec_f.kind, spec_g.kind)
    x, y = spec_f.x, spec_g.x
    if kinds == ("shl", "shl"):
        return (1 - q * x * y) / (1 - x * y)
    if kinds == ("shl", "sqw"):
        return (1 + x * y) / (1 - s * x)
    if kinds == ("sqw", "shl"):
        return (1 + x * y) / (1 - s * y)
    if kinds == ("shl", "sg"):
        return 1 + x * y
    if kinds == ("sg", "shl"):
        return 1 + x * y
    if mode == "exact":
        raise ModeError(f"Pi for pair {kinds} is an infinite product")
    if kinds == ("sqw", "sqw"):
        return (
            q_pochhammer_inf(-s * x, q)
            * q_pochhammer_inf(-s * y, q)
            / (q_pochhammer_inf(s * s, q) * q_pochhammer_inf(x * y, q))
        )
    if kinds in (("sqw", "sg"), ("sg", "sqw")):
        return q_pochhammer_inf(-s * (x if kinds[0] == "sg" else y), q) / q_pochhammer_inf(
            x * y, q
        )
    if kinds == ("sg", "sg"):
        return 1 / q_pochhammer_inf(x * y, q)
    if "fused" in kinds:
        u, qJ, _ = spec_f.fused_coords(qp)
        v, qI, _ = spec_g.fused_coords(qp)
        z = u * v
        return (
            q_pochhammer_inf(z * qI, q)
            * q_pochhammer_inf(z * qJ, q)
            / (q_pochhammer_inf(z, q) * q_pochhammer_inf(z * qI * qJ, q))
        )
    raise UnsupportedPair(str(kinds))


def admissible(spec_f, spec_g, qp):
    """Convergence region of the infinite Cauchy summation for the pair."""
    q, s = qp
    kinds = (spec_f.kind, spec_g.kind)
    x, y = as_mp(spec_f.x), as_mp(spec_g.x)
    s_ = as_mp(s)
    if kinds == ("shl", "shl"):
        return abs((x - s_) * (y - s_)) < abs((1 - s_ * x) * (1 - s_ * y))
    if "shl" in kinds and "sqw" in kinds:
        u = x if kinds[0] == "shl" else y
        return u != 1 / s_
    if kinds == ("sqw", "sqw"):
        return abs(x * y) < 1
    if "sg" in kinds and "shl" in kinds:
        v = y if kinds[0] == "sg" else x
        return abs(s_ * (s_ - v)) < abs(1 - s_ * v)
    if "sg" in kinds:
        return abs(x * y) < 1
    return True


# ---------------------------------------------------------------------------
# the scalar Markov kernel at the infinite column, and the stochastic models
# ---------------------------------------------------------------------------


def u0_weight_times_pi(spec_f, spec_g, qp, i0, i0p, j0p, j0):
    """Pi(f;g) * U0(i0, i0p; j0p, j0): the rational part of the column-0 kernel.

    U0 itself is this quantity divided by Pi; keeping the two factors apart
    preserves exactness for the pairs whose Pi is an infinite product.
    """
    if min(i0, i0p, j0p, j0) < 0 or i0 + j0 != i0p + j0p:
        return 0 * one_like(*qp)
    num = (
        boundary_weight(spec_g, qp, j0p)
        * boundary_weight(spec_f, qp, j0)
        * cross_R(spec_f, spec_g, qp, (j0, j0p, i0p, i0))
    )
    den = boundary_weight(spec_g, qp, i0) * boundary_weight(spec_f, qp, i0p)
    if den == 0:
        raise ZeroDivisionError("column-0 kernel conditioned on a zero-weight input")
    return num / den


def u0_weight(spec_f, spec_g, qp, i0, i0p, j0p, j0, mode="auto"):
    """The column-0 Markov kernel U0(i0, i0p; j0p, j0).

    Given incoming horizontal multiplicities (i0 on the column line, i0p on the
    row line), this is the probability of outgoing (j0p, j0); rows sum to one.
    """
    val = u0_weight_times_pi(spec_f, spec_g, qp, i0, i0p, j0p, j0)
    if val == 0:
        return val
    pi = pi_factor(spec_f, spec_g, qp, mode=mode)
    if not is_exact(val) or not is_exact(pi):
        return as_mp(val) / as_mp(pi)
    return val / pi


def stoch_weight(model, params, qp, state, mode="auto"):
    """Stochastic vertex weight at one cell of a quadrant model.

    model 's6v': params (u, v), occupancies all in {0,1};
    model 'hs6v': params (u, theta), vertical unbounded, horizontal in {0,1};
    model 'phi43': params (xi, theta), all occupancies unbounded.

    All three are defined as the column-0 kernel of the corresponding pair of
    specializations, with the horizontal indices complemented for the two
    up-right models.
    """
    i1, j1, i2, j2 = state
    if model == "s6v":
        u, v = params
        if not all(x in (0, 1) for x in state):
            raise ParamOutOfRange("six-vertex occupancies must be 0 or 1")
        return u0_weight(shl(u), shl(v), qp, i1, 1 - j1, i2, 1 - j2, mode=mode)
    if model == "hs6v":
        u, theta = params
        if j1 not in (0, 1) or j2 not in (0, 1):
            raise ParamOutOfRange("higher spin horizontal occupancies must be 0 or 1")
        return u0_weight(shl(u), sqw(theta), qp, i1, 1 - j1, i2, 1 - j2, mode=mode)
    if model == "phi43":
        xi, theta = params
        return u0_weight(sqw(xi), sqw(theta), qp, i1, j1, i2, j2, mode=mode)
    raise ParamOutOfRange(f"unknown model {model!r}")


def phi43_weight_direct(xi, theta, qp, state):
    """Closed form of the pushing-model weight (test oracle, apfloat).

    L(i1,j1;i2,j2) = [i1+j2=i2+j1] xi^{i2} s^{i1} theta^{i2-i1}
        q^{j1 j2 + i1(i1-1)/2} (-s/theta;q)_{i2} (-s/xi;q)_{j2}
        / ((-s/theta;q)_{i1} (-s/xi;q)_{j1} (q;q)_{j2} (-q/(s xi);q)_{j2-i2})
        * (s^2 q^{i1+j2};q)_oo (theta xi;q)_oo / ((-s xi;q)_oo (-s theta;q)_oo)
        * 4-phi-3-regularized(...).
    """
    q, s = qp
    i1, j1, i2, j2 = state
    if min(state) < 0 or i1 + j2 != i2 + j1:
        return mp.mpf(0)
    from .qkernel import reg_qhyper

    xi_, theta_, q_, s_ = map(as_mp, (xi, theta, q, s))
    pref = (
        xi_ ** i2
        * s_ ** i1
        * theta_ ** (i2 - i1)
        * q_ ** (j1 * j2 + i1 * (i1 - 1) // 2)
        * q_pochhammer(-s_ / theta_, q_, i2)
        * q_pochhammer(-s_ / xi_, q_, j2)
        / (
            q_pochhammer(-s_ / theta_, q_, i1)
            * q_pochhammer(-s_ / xi_, q_, j1)
            * q_pochhammer(q_, q_, j2)
            * q_pochhammer(-q_ / (s_ * xi_), q_, j2 - i2)
        )
    )
    pref = pref * (
        q_pochhammer_inf(s_ * s_ * q_ ** (i1 + j2), q_)
        * q_pochhammer_inf(theta_ * xi_, q_)
        / (q_pochhammer_inf(-s_ * xi_, q_) * q_pochhammer_inf(-s_ * theta_, q_))
    )
    series = reg_qhyper(
        j1,
        [q_ ** (-j2) if j2 else mp.mpf(1), -s_ * theta_, -q_ / (s_ * xi_)],
        [-s_ / xi_, q_ ** (1 + i1 - j1), -theta_ / s_ * q_ ** (1 - j2 - i1)],
        q_,
        q_,
    )
    return pref * series


def _level_of(spec, qp):
    if spec.kind in ("shl", "fused"):
        return spec.fused_coords(qp)[2]
    return None


def u0_row(spec_f, spec_g, qp, i0, i0p, mode="auto", tail=None):
    """The full outgoing law of the column-0 kernel from inputs (i0, i0p).

    Returns a list of ((j0p, j0), probability).  j0 = i0 + j0p - i0p is forced
    by conservation; the enumeration over j0p is finite whenever a row carries
    an integer fusion level, and otherwise stops once the accumulated mass is
    within ``tail`` of one.
    """
    tail = mp.mpf("1e-30") if tail is None else tail
    lev_f = _level_of(spec_f, qp)   # caps j0
    lev_g = _level_of(spec_g, qp)   # caps j0p
    hi = None
    if lev_g is not None:
        hi = lev_g
    if lev_f is not None:
        cap = lev_f + i0 - i0p
        hi = cap if hi is None else min(hi, cap)
    out = []
    acc = mp.mpf(0)
    j0p = max(0, i0 - i0p)
    while True:
        if hi is not None and j0p > hi:
            break
        j0 = i0p + j0p - i0
        p = u0_weight(spec_f, spec_g, qp, i0, i0p, j0p, j0, mode=mode)
        if p != 0:
            out.append(((j0p, j0), p))
            acc += as_mp(p)
        if hi is None and out and acc > 1 - tail:
            break
        j0p += 1
        if j0p > 10000:
            raise RuntimeError("column-0 law failed to accumulate mass")
    return out


# ---------------------------------------------------------------------------
# nonnegativity sweeps
# ---------------------------------------------------------------------------


def nonneg_check(family, qp, cutoff=5, tol=None):
    """Evaluate a weight family on all occupancy tuples up to a cutoff.

    family: ('w', spec) / ('w*', spec) / ('cross', spec_f, spec_g) /
            ('stoch', model, params).
    Returns (True, None) or (False, (state, value)).  Exact values are tested
    against 0; apfloat values against -1e-30 (or ``tol``).
    """
    tol = mp.mpf("-1e-30") if tol is None else tol

    def bad(v):
        return v < 0 if is_exact(v) else as_mp(v) < tol

    rng4 = range(cutoff + 1)
    if family[0] in ("w", "w*"):
        spec = family[1]
        fn = w_fused if family[0] == "w" else w_dual_fused
        for i1 in rng4:
            for j1 in rng4:
                for i2 in rng4:
                    j2 = i1 + j1 - i2 if family[0] == "w" else i2 + j1 - i1
                    if family[0] == "w*":
                        j2 = i2 + j1 - i1
                    if j2 < 0 or j2 > cutoff:
                        continue
                    st = (i1, j1, i2, j2)
                    v = fn(spec, qp, st)
                    if bad(v):
                        return False, (st, v)
        return True, None
    if family[0] == "cross":
        _, f, g = family
        for i1 in rng4:
            for j1 in rng4:
                for i2 in rng4:
                    j2 = i2 + j1 - i1
                    if j2 < 0 or j2 > cutoff:
                        continue
                    st = (i1, j1, i2, j2)
                    v = cross_R(f, g, qp, st)
                    if bad(v):
                        return False, (st, v)
        return True, None
    if family[0] == "stoch":
        _, model, params = family
        jr = (0, 1) if model in ("s6v", "hs6v") else rng4
        ir = (0, 1) if model == "s6v" else rng4
        for i1 in ir:
            for j1 in jr:
                for i2 in ir:
                    # phi43 conserves i1 + j2 = i2 + j1; the up-right models
                    # conserve i1 + j1 = i2 + j2
                    j2 = i2 + j1 - i1 if model == "phi43" else i1 + j1 - i2
                    if model in ("s6v", "hs6v") and j2 not in (0, 1):
                        continue
                    if j2 < 0 or j2 > max(cutoff, 1):
                        continue
                    st = (i1, j1, i2, j2)
                    v = stoch_weight(model, params, qp, st)
                    if bad(v):
                        return False, (st, v)
        return True, None
    raise ParamOutOfRange(f"unknown family {family[0]!r}")
