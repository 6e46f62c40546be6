"""Exact-rational / arbitrary-precision scalars, q-series primitives, and discrete laws.

Numbers flow through the package in one of two modes:

* exact mode -- ``int`` / ``fractions.Fraction`` (closed under +, -, *, / by
  nonzero), used for every polynomial or rational identity so that checks hold
  with zero tolerance;
* apfloat mode -- mpmath reals/complexes at >= 50 significant digits (default),
  used whenever an infinite product ``(a; q)_oo`` enters.

All q-series functions below are polymorphic in the two modes: feed them
Fractions and they stay exact, feed them mpmath numbers and they compute at the
current working precision.
"""

from fractions import Fraction

import mpmath as mp
import numpy as np

from .errors import ArityMismatch, ModeError, ParamOutOfRange

DEFAULT_DPS = 50

mp.mp.dps = max(mp.mp.dps, DEFAULT_DPS)


def is_exact(*xs):
    """True when every argument is an int or a Fraction."""
    return all(isinstance(x, (int, Fraction)) for x in xs)


def as_mp(x):
    """Convert a scalar (Fraction, int, float, mpf/mpc) to an mpmath number."""
    if isinstance(x, Fraction):
        return mp.mpf(x.numerator) / x.denominator
    return mp.mpmathify(x)


def one_like(*xs):
    return Fraction(1) if is_exact(*xs) else mp.mpf(1)


class QParamsView:
    """A lightweight (q, s) pair without range validation, for apfloat mirrors
    of exact parameter points."""

    __slots__ = ("q", "s")

    def __init__(self, q, s):
        self.q = q
        self.s = s

    def __iter__(self):
        return iter((self.q, self.s))

    def __hash__(self):
        return hash((self.q, self.s))

    def __eq__(self, other):
        return (self.q, self.s) == (getattr(other, "q", None), getattr(other, "s", None))

    def require_sqw_box(self):
        pass

    def __repr__(self):
        return f"QParamsView(q={self.q}, s={self.s})"


class QParams:
    """The global pair (q, s): quantization parameter q in (0,1), spin s in (-1,0)."""

    __slots__ = ("q", "s")

    def __init__(self, q, s):
        if not (0 < q < 1):
            raise ParamOutOfRange(f"q={q} must lie in (0,1)")
        if not (-1 < s < 0):
            raise ParamOutOfRange(f"s={s} must lie in (-1,0)")
        self.q = q
        self.s = s

    def require_sqw_box(self):
        """The sqW/sqW cross weight additionally needs s in [-sqrt(q), 0)."""
        if self.s * self.s > self.q:
            raise ParamOutOfRange(f"s={self.s} must satisfy s^2 <= q={self.q}")

    def __iter__(self):
        return iter((self.q, self.s))

    def __hash__(self):
        return hash((self.q, self.s))

    def __eq__(self, other):
        return isinstance(other, QParams) and (self.q, self.s) == (other.q, other.s)

    def __repr__(self):
        return f"QParams(q={self.q}, s={self.s})"


def q_pochhammer(a, q, n):
    """(a; q)_n with the three-branch definition.

    n = 0 gives 1; n >= 1 the product of (1 - a q^i), i = 0..n-1; n <= -1 the
    reciprocal product over i = n..-1.   Exact in exact mode.  Raises
    ZeroDivisionError when a negative-index factor vanishes.
    """
    if n == 0:
        return one_like(a, q)
    out = one_like(a, q)
    if n > 0:
        p = one_like(a, q)
        for _ in range(n):
            out *= 1 - a * p
            p *= q
        return out
    for i in range(n, 0):
        factor = 1 - a * q ** i
        if factor == 0:
            raise ZeroDivisionError(f"(a;q)_{n} has a vanishing factor 1 - a q^{i}")
        out /= factor
    return out


def q_pochhammer_inf(a, q, mode="ap"):
    """(a; q)_oo, apfloat mode only; truncated once |a q^k| < 10^-(dps+10).

    The result carries relative error below 10^-dps at the current working
    precision.  Requesting exact mode raises ModeError: the infinite product is
    irrational for generic rational inputs.
    """
    if mode == "exact":
        raise ModeError("(a;q)_oo has no exact-rational value; use apfloat mode")
    dps = mp.mp.dps
    with mp.workdps(dps + 10):
        a_, q_ = as_mp(a), as_mp(q)
        if abs(q_) >= 1:
            raise ParamOutOfRange("(a;q)_oo needs |q| < 1")
        threshold = mp.mpf(10) ** (-(dps + 10))
        out = mp.mpf(1)
        term = a_
        while abs(term) >= threshold:
            out *= 1 - term
            term *= q_
        result = out
    return +result


def reg_qhyper(n, aa, bb, q, z):
    """Regularized terminating basic hypergeometric sum.

    Returns  sum_{j=0}^{n} z^j (q^-n; q)_j / (q; q)_j
             * prod_i (a_i; q)_j (q^j b_i; q)_{n-j},
    which is entire in the lower parameters b_i (no poles to regularize away).
    Exact in exact mode.
    """
    if len(aa) != len(bb):
        raise ArityMismatch(f"{len(aa)} upper vs {len(bb)} lower parameters")
    if n < 0:
        raise ParamOutOfRange("n must be a nonnegative integer")
    one = one_like(q, z, *aa, *bb)
    # suffix products g_i[j] = (q^j b_i; q)_{n-j}, built by multiplication only
    k = len(aa)
    suffix = []
    for b in bb:
        g = [one] * (n + 1)
        for j in range(n - 1, -1, -1):
            g[j] = (1 - b * q ** j) * g[j + 1]
        suffix.append(g)
    total = one * 0
    coeff = one          # z^j (q^-n;q)_j / (q;q)_j, updated incrementally
    afac = [one] * k     # (a_i;q)_j, updated incrementally
    qj = one             # q^j
    qmn = q ** (-n) if n else one
    for j in range(n + 1):
        term = coeff
        for i in range(k):
            term = term * afac[i] * suffix[i][j]
        total += term
        if j < n:
            coeff = coeff * z * (1 - qmn * qj) / (1 - q * qj)
            for i in range(k):
                afac[i] = afac[i] * (1 - aa[i] * qj)
            qj *= q
    return total


def elementary_symmetric(r, xs):
    """e_r(xs); e_0 = 1 and e_r = 0 for r > len(xs)."""
    if r < 0:
        raise ParamOutOfRange("r must be >= 0")
    xs = list(xs)
    one = one_like(*xs)
    if r > len(xs):
        return 0 * one
    e = [one] + [0 * one] * r
    for x in xs:
        for j in range(r, 0, -1):
            e[j] = e[j] + x * e[j - 1]
    return e[r]


# ---------------------------------------------------------------------------
# discrete laws of the scalar layer: q-negative binomial, q-Poisson, Bernoulli
# ---------------------------------------------------------------------------

class DiscreteLaw:
    """One of the three boundary laws: qNB(r,p), qPoi(p), Ber(p).

    pmf values are mpmath numbers (the normalization carries (p;q)_oo);
    sampling inverts the CDF, truncating at cumulative mass 1 - 1e-15.
    """

    def __init__(self, label, q=None, r=None, p=None):
        self.label = label
        self.q = q
        self.r = r
        self.p = p
        self._norm = None
        self._cdf_cache = []
        if label == "ber":
            if not (0 <= p <= 1):
                raise ParamOutOfRange(f"Bernoulli needs p in [0,1], got {p}")
        elif label == "qnb":
            if not (0 <= p < 1):
                raise ParamOutOfRange(f"qNB needs 0 <= p < 1, got {p}")
            if not (p * r < 1):
                raise ParamOutOfRange(f"qNB needs p*r < 1, got {p * r}")
        elif label == "qpoi":
            if not (0 <= p < 1):
                raise ParamOutOfRange(f"qPoisson needs 0 <= p < 1, got {p}")
        else:
            raise ParamOutOfRange(f"unknown law {label!r}")

    @classmethod
    def qnb(cls, r, p, q):
        """q-negative binomial: P(k) = p^k (r;q)_k / (q;q)_k * (p;q)_oo / (pr;q)_oo."""
        return cls("qnb", q=q, r=r, p=p)

    @classmethod
    def qpoi(cls, p, q):
        """q-Poisson: the r = 0 case of the q-negative binomial."""
        return cls("qpoi", q=q, r=0, p=p)

    @classmethod
    def bernoulli(cls, p):
        return cls("ber", p=p)

    def _normalization(self):
        if self._norm is None:
            self._norm = q_pochhammer_inf(self.p, self.q) / q_pochhammer_inf(
                self.p * self.r, self.q
            )
        return self._norm

    def pmf(self, k):
        if k < 0:
            return mp.mpf(0)
        if self.label == "ber":
            p = as_mp(self.p)
            return p if k == 1 else (1 - p if k == 0 else mp.mpf(0))
        # incremental prefactors p^k (r;q)_k / (q;q)_k
        pre = getattr(self, "_pre", None)
        if pre is None:
            pre = self._pre = [mp.mpf(1)]
        p, r, q = map(as_mp, (self.p, self.r, self.q))
        while len(pre) <= k:
            j = len(pre)
            pre.append(pre[-1] * p * (1 - r * q ** (j - 1)) / (1 - q ** j))
        return pre[k] * self._normalization()

    def _cdf(self, k):
        while len(self._cdf_cache) <= k:
            j = len(self._cdf_cache)
            prev = self._cdf_cache[-1] if self._cdf_cache else mp.mpf(0)
            self._cdf_cache.append(prev + self.pmf(j))
        return self._cdf_cache[k]

    def sample(self, rng):
        """Inverse-CDF draw; rng is a numpy Generator."""
        if self.label == "ber":
            return int(rng.random() < float(self.p))
        u = rng.random()
        k = 0
        cutoff = 1 - 1e-15
        while True:
            c = self._cdf(k)
            if u < c or c > cutoff:
                return k
            k += 1


# ---------------------------------------------------------------------------
# reproducible splittable randomness: one Philox stream per trajectory
# ---------------------------------------------------------------------------

def make_rng(seed):
    """Counter-based generator from an explicit integer seed."""
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(seed)))


def rng_streams(seed, n):
    """n independent child streams of a master seed; safe to hand to workers."""
    return [
        np.random.Generator(np.random.Philox(child))
        for child in np.random.SeedSequence(seed).spawn(n)
    ]


def random_rational(rng, lo=Fraction(0), hi=Fraction(1, 4), max_den=40):
    """A small-denominator rational in (lo, hi), for exact identity checks."""
    den = int(rng.integers(7, max_den + 1))
    lo_n = int(lo * den) + 1
    hi_n = int(hi * den) - 0
    if hi_n <= lo_n:
        hi_n = lo_n + 1
    return Fraction(int(rng.integers(lo_n, hi_n + 1)), den)
