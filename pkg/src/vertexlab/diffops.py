"""Difference operators acting diagonally on the two symmetric-function
families, implemented pointwise on evaluators (never on expression trees):
exact verification at random rational points certifies the rational-function
identities, with degree bounds supplied by the lattice size.
"""

import itertools
from fractions import Fraction

from .errors import DegeneratePoint, ParamOutOfRange
from .partitions import EMPTY
from .qkernel import elementary_symmetric, one_like
from .symfun import skew_F
from .weights import shl, sqw


class PointFunction:
    """A function of n scalar variables given by an evaluator."""

    __slots__ = ("fn", "n")

    def __init__(self, fn, n):
        self.fn = fn
        self.n = n

    def __call__(self, point):
        if len(point) != self.n:
            raise ParamOutOfRange(f"expected {self.n} variables, got {len(point)}")
        return self.fn(list(point))


def shl_function(lam, qp, n):
    """F_lam(u_1..u_n) as a point function; zeros among the variables are
    dropped (the family is stable under appending a zero variable)."""

    def fn(point):
        live = tuple(shl(u) for u in point if u != 0)
        return skew_F(lam, EMPTY, live, qp)

    return PointFunction(fn, n)


def sqw_function(lam, qp, n):
    """The spin q-Whittaker polynomial of lam in n variables."""

    def fn(point):
        return skew_F(lam.conjugate(), EMPTY, tuple(sqw(x) for x in point), qp)

    return PointFunction(fn, n)


def product_function(factors_fn, n):
    """prod_i g(x_i) for a scalar map g, as a point function."""

    def fn(point):
        val = one_like(*point)
        for x in point:
            val *= factors_fn(x)
        return val

    return PointFunction(fn, n)


def _check_point(point):
    if len({*point}) != len(point) or any(x == 0 for x in point):
        raise DegeneratePoint("variables must be pairwise distinct and nonzero")


def apply_D_r(f, r, t, point):
    """r-th Hall-Littlewood-type difference operator at a point:

        t^{r(r-1)/2} sum_{|I|=r} prod_{i in I, j not in I}
            (t u_i - u_j)/(u_i - u_j) * f(u with the I-variables set to 0).

    The constant t^{r(r-1)/2} is the standard normalization under which the
    eigenvalue on the family member of length ell is e_r(1, t, ..,
    t^{n-ell-1}); it is forced already by the classical (s = 0) case at
    lam = empty, r = n = 2.
    """
    _check_point(point)
    n = len(point)
    if not (1 <= r <= n):
        raise ParamOutOfRange("need 1 <= r <= n")
    total = 0 * one_like(t, *point)
    for subset in itertools.combinations(range(n), r):
        inside = set(subset)
        coeff = one_like(t, *point)
        for i in subset:
            for j in range(n):
                if j in inside:
                    continue
                coeff *= (t * point[i] - point[j]) / (point[i] - point[j])
        zeroed = [0 if i in inside else point[i] for i in range(n)]
        total += coeff * f(zeroed)
    return t ** (r * (r - 1) // 2) * total


def eigenvalue_D_r(r, t, n, ell):
    """e_r(1, t, ..., t^{n-ell-1}): the eigenvalue on the degree-ell member."""
    return elementary_symmetric(r, [t ** k for k in range(n - ell)])


def apply_E(g, qp, point):
    """The q-shift operator diagonal on the spin q-Whittaker family:

        sum_j (1 + s/theta_j)^l prod_{i != j} theta_j/(theta_j - theta_i)
              * g(..., theta_j / q, ...)
        + (-s)^l / (theta_1 ... theta_l) * g(point),

    with eigenvalue q^{-lam_1}.
    """
    _check_point(point)
    q, s = qp
    l = len(point)
    total = 0 * one_like(q, s, *point)
    for j in range(l):
        coeff = (1 + s / point[j]) ** l
        for i in range(l):
            if i != j:
                coeff *= point[j] / (point[j] - point[i])
        shifted = list(point)
        shifted[j] = point[j] / q
        total += coeff * g(shifted)
    prod = one_like(*point)
    for x in point:
        prod *= x
    return total + (-s) ** l / prod * g(list(point))


def apply_D_tilde(f, qp, point):
    """q^{-n} (Id + (q-1) D_1), with t replaced by q; eigenvalue q^{-ell}."""
    q, _ = qp
    n = len(point)
    return q ** (-n) * (f(list(point)) + (q - 1) * apply_D_r(f, 1, q, point))


def cauchy_kernel_function(qp, n_u, thetas):
    """Pi(u_1..u_n; theta_1..theta_l) = prod (1 + u_i theta_j)/(1 - s u_i),
    as a point function of the u variables."""
    _, s = qp

    def g(u):
        val = one_like(u, s)
        for th in thetas:
            val *= (1 + u * th)
        return val / (1 - s * u) ** len(thetas)

    return product_function(g, n_u)


def cauchy_kernel_function_theta(qp, us, n_theta):
    """The same kernel as a point function of the theta variables."""
    _, s = qp

    def g(th):
        val = one_like(th, s)
        for u in us:
            val *= (1 + u * th) / (1 - s * u)
        return val

    return product_function(g, n_theta)
