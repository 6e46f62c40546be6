"""Young diagrams, interlacing relations, and constrained enumeration.

A partition is stored as a weakly decreasing tuple of positive parts; trailing
zeros are stripped on construction so equality is structural on the canonical
form.  Partitions double as configurations of vertical arrows on the
nonnegative integer line: the diagram ``1^{m_1} 2^{m_2} ...`` puts ``m_h``
arrows at location ``h`` (location 0 implicitly carries infinitely many arrows
and is never stored).
"""

from itertools import count

from .errors import ParamOutOfRange


class Partition(tuple):
    """A Young diagram; immutable, hashable, canonical (no trailing zeros)."""

    __slots__ = ()

    def __new__(cls, parts=()):
        clean = tuple(int(p) for p in parts if p)
        if any(p < 0 for p in clean):
            raise ParamOutOfRange(f"negative part in {parts}")
        if any(clean[i] < clean[i + 1] for i in range(len(clean) - 1)):
            raise ParamOutOfRange(f"parts not weakly decreasing: {parts}")
        return super().__new__(cls, clean)

    @property
    def ell(self):
        """Number of nonzero parts."""
        return len(self)

    @property
    def size(self):
        return sum(self)

    def part(self, i):
        """1-based part access; zero beyond the length."""
        return self[i - 1] if 1 <= i <= len(self) else 0

    def mult(self, h):
        """Multiplicity of the part h >= 1 (arrow count at location h)."""
        return sum(1 for p in self if p == h)

    def conjugate(self):
        cached = _CONJUGATES.get(self)
        if cached is None:
            cols = [0] * (self[0] if self else 0)
            for p in self:
                for i in range(p):
                    cols[i] += 1
            cached = Partition(cols)
            _CONJUGATES[self] = cached
            _CONJUGATES.setdefault(cached, self)
        return cached

    def contains(self, other):
        """Containment of diagrams: other_i <= self_i for all i."""
        return len(other) <= len(self) and all(
            other[i] <= self[i] for i in range(len(other))
        )

    def with_part(self, h, m=1):
        """This diagram with m extra parts equal to h."""
        return Partition(sorted(self + (h,) * m, reverse=True))

    def to_json(self):
        return list(self)

    @classmethod
    def from_json(cls, data):
        return cls(data)


EMPTY = Partition()
_CONJUGATES = {}


def partitions_of_containing(n, base, max_part=None, max_length=None):
    """Partitions of n containing ``base``, optionally boxed."""
    max_part = n if max_part is None else min(max_part, n)
    max_length = n if max_length is None else max_length
    if base.size > n or (base and base[0] > max_part) or base.ell > max_length:
        return

    def rec(i, budget, mx):
        lo = base.part(i + 1)
        if i == max_length:
            if budget == 0:
                yield ()
            return
        if budget == 0:
            if lo == 0:
                yield ()
            return
        # the remaining slots must absorb the rest of base
        tail_need = base.size - sum(base.part(k + 1) for k in range(i))
        if budget < tail_need:
            return
        for v in range(min(mx, budget), lo - 1, -1):
            if v == 0:
                if lo == 0 and budget == 0:
                    yield ()
                return
            for rest in rec(i + 1, budget - v, v):
                yield (v,) + rest

    for parts in rec(0, n, max_part):
        yield Partition(parts)


def interlace(mu, lam):
    """mu interlaces lam (lam/mu is a horizontal strip).

    Equivalent to the two inequality chains
    lam_1 >= mu_1 >= lam_2 >= mu_2 >= ... with ell(lam) in {ell(mu), ell(mu)+1}.
    """
    if not lam.contains(mu):
        return False
    return all(lam.part(i + 1) <= mu.part(i) for i in range(1, len(lam)))


def column_interlace(mu, lam):
    """mu column-interlaces lam, i.e. interlace(mu', lam').

    Equivalent to lam/mu being a vertical strip (each row grows by at most one
    box); in arrow language, a horizontal-arrow configuration between the two
    diagrams with at most ``arrows below`` leaving each location to the right.
    """
    if len(mu) > len(lam):
        return False
    return all(mu.part(i) <= lam.part(i) <= mu.part(i) + 1 for i in range(1, len(lam) + 1))


def contains(mu, lam):
    """mu <= lam part-wise (the relation of a scaled-geometric step)."""
    return lam.contains(mu)


STEP_RELATION = {"shl": interlace, "sqw": column_interlace, "sg": contains, "fused": contains}


def split_at(lam, h):
    """Split lam into (parts < h, parts >= h); concatenation recovers lam."""
    if h < 2:
        raise ParamOutOfRange("split threshold must be >= 2")
    small = Partition(p for p in lam if p < h)
    large = Partition(p for p in lam if p >= h)
    return small, large


def enumerate_bounded(max_first_part, max_length):
    """All partitions with lam_1 <= max_first_part and ell <= max_length.

    Deterministic order: by size, then lexicographically decreasing.
    """
    if max_first_part < 0 or max_length < 0:
        raise ParamOutOfRange("bounds must be >= 0")

    def gen(n, max_part, slots):
        if n == 0:
            yield ()
            return
        if slots == 0 or max_part == 0:
            return
        for first in range(min(n, max_part), 0, -1):
            for rest in gen(n - first, first, slots - 1):
                yield (first,) + rest

    for n in range(0, max_first_part * max_length + 1):
        for parts in gen(n, max_first_part, max_length):
            yield Partition(parts)


def partitions_of(n, max_part=None, max_length=None):
    """Partitions of exactly n, optionally boxed."""
    max_part = n if max_part is None else min(max_part, n)
    max_length = n if max_length is None else max_length

    def gen(n, mx, slots):
        if n == 0:
            yield ()
            return
        if slots == 0 or mx == 0:
            return
        for first in range(min(n, mx), 0, -1):
            for rest in gen(n - first, first, slots - 1):
                yield (first,) + rest

    for parts in gen(n, max_part, max_length):
        yield Partition(parts)


# ---------------------------------------------------------------------------
# step enumeration: all diagrams one relation-step below / above a given one
# ---------------------------------------------------------------------------

def hstrip_under(lam):
    """All mu with interlace(mu, lam): mu_i in [lam_{i+1}, lam_i]."""
    if not lam:
        yield EMPTY
        return
    ranges = [range(lam.part(i + 1), lam.part(i) + 1) for i in range(1, len(lam) + 1)]

    def rec(i, acc):
        if i == len(ranges):
            yield Partition(acc)
            return
        for v in ranges[i]:
            yield from rec(i + 1, acc + [v])

    # parts chosen within interlacing windows are automatically decreasing
    yield from rec(0, [])


def hstrip_over(lam, max_first):
    """All nu with interlace(lam, nu) and nu_1 <= max_first."""
    n = len(lam) + 1
    ranges = [range(lam.part(1), max_first + 1)]
    ranges += [range(lam.part(i), lam.part(i - 1) + 1) for i in range(2, n + 1)]

    def rec(i, acc):
        if i == len(ranges):
            yield Partition(acc)
            return
        for v in ranges[i]:
            if acc and v > acc[-1]:
                continue
            yield from rec(i + 1, acc + [v])

    yield from rec(0, [])


def vstrip_under(lam):
    """All mu with column_interlace(mu, lam): mu_i in {lam_i - 1, lam_i}."""
    def rec(i, acc):
        if i == len(lam):
            yield Partition(acc)
            return
        for v in (lam[i], lam[i] - 1):
            if acc and v > acc[-1]:
                continue
            yield from rec(i + 1, acc + [v])

    yield from rec(0, [])


def vstrip_over(lam, max_length):
    """All nu with column_interlace(lam, nu) and ell(nu) <= max_length."""
    def rec(i, acc):
        if i == len(lam):
            # any number of fresh rows of height 1, up to the length budget
            for extra in range(0, max(0, max_length - len(acc)) + 1):
                yield Partition(acc + [1] * extra)
            return
        for v in (lam[i] + 1, lam[i]):
            if acc and v > acc[-1]:
                continue
            yield from rec(i + 1, acc + [v])

    if len(lam) > max_length:
        return
    yield from rec(0, [])


def subdiagrams_between(mu, lam):
    """All kappa with mu <= kappa <= lam (containment both ways)."""
    if not lam.contains(mu):
        return
    n = len(lam)

    def rec(i, acc):
        if i == n:
            yield Partition(acc)
            return
        hi = min(lam[i], acc[-1]) if acc else lam[i]
        lo = mu.part(i + 1)
        for v in range(hi, lo - 1, -1):
            yield from rec(i + 1, acc + [v])

    yield from rec(0, [])


def superdiagrams_over(lam, max_first, max_length):
    """All nu >= lam in a (max_length x max_first) box."""
    for nu in enumerate_bounded(max_first, max_length):
        if nu.contains(lam):
            yield nu


def step_under(lam, kind):
    """Diagrams one step below lam under the relation attached to a spec kind."""
    if kind == "shl":
        return hstrip_under(lam)
    if kind == "sqw":
        return vstrip_under(lam)
    if kind in ("sg", "fused"):
        return subdiagrams_between(EMPTY, lam)
    raise ParamOutOfRange(f"unknown step kind {kind!r}")


def step_over(lam, kind, max_first, max_length):
    """Diagrams one step above lam under the relation of a spec kind, boxed."""
    if kind == "shl":
        return hstrip_over(lam, max_first)
    if kind == "sqw":
        return vstrip_over(lam, max_length)
    if kind in ("sg", "fused"):
        return superdiagrams_over(lam, max_first, max_length)
    raise ParamOutOfRange(f"unknown step kind {kind!r}")
