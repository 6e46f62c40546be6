import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from vertexlab.errors import ParamOutOfRange
from vertexlab.partitions import (
    EMPTY,
    Partition,
    column_interlace,
    enumerate_bounded,
    hstrip_over,
    hstrip_under,
    interlace,
    partitions_of,
    partitions_of_containing,
    split_at,
    subdiagrams_between,
    vstrip_over,
    vstrip_under,
)

parts_strategy = st.lists(st.integers(1, 8), min_size=0, max_size=6).map(
    lambda xs: Partition(sorted(xs, reverse=True))
)


def test_canonical_form():
    assert Partition([3, 2, 0, 0]) == Partition([3, 2])
    assert Partition([]) == EMPTY
    with pytest.raises(ParamOutOfRange):
        Partition([1, 2])


@given(parts_strategy)
@settings(max_examples=100, deadline=None)
def test_conjugate_involution(lam):
    assert lam.conjugate().conjugate() == lam
    assert lam.ell == lam.conjugate().part(1)
    # multiplicities from conjugate column differences
    c = lam.conjugate()
    for i in range(1, lam.part(1) + 1):
        assert lam.mult(i) == c.part(i) - c.part(i + 1)


def test_interlace_examples():
    assert interlace(EMPTY, EMPTY)
    assert interlace(Partition([2, 1]), Partition([4, 2, 1]))
    assert not interlace(Partition([1]), Partition([3, 3]))  # mu_1 < lam_2


def test_column_interlace_examples():
    # column interlacing is interlacing of the conjugates, i.e. lam/mu is a
    # vertical strip
    assert column_interlace(EMPTY, Partition([1]))
    assert not column_interlace(EMPTY, Partition([2]))
    assert column_interlace(EMPTY, Partition([1, 1, 1]))
    assert not column_interlace(Partition([2]), Partition([3, 2]))
    assert column_interlace(Partition([2]), Partition([3]))
    assert not column_interlace(Partition([1, 1, 1]), Partition([1]))


@given(parts_strategy, parts_strategy)
@settings(max_examples=150, deadline=None)
def test_column_interlace_is_conjugated_interlace(mu, lam):
    assert column_interlace(mu, lam) == interlace(mu.conjugate(), lam.conjugate())


@given(parts_strategy, parts_strategy)
@settings(max_examples=100, deadline=None)
def test_interlace_implies_containment(mu, lam):
    if interlace(mu, lam):
        assert lam.contains(mu)


def test_interlace_count_matches_brute_force():
    for lam in enumerate_bounded(6, 4):
        if lam.size > 12:
            continue
        direct = sum(1 for _ in hstrip_under(lam))
        brute = sum(
            1
            for mu in enumerate_bounded(lam.part(1), lam.ell)
            if interlace(mu, lam)
        )
        assert direct == brute and direct >= 1


def test_split_at():
    assert split_at(Partition([4, 4, 2, 1]), 3) == (Partition([2, 1]), Partition([4, 4]))
    assert split_at(EMPTY, 5) == (EMPTY, EMPTY)
    assert split_at(Partition([5]), 2) == (EMPTY, Partition([5]))
    small, large = split_at(Partition([4, 3, 3, 1]), 3)
    assert Partition(sorted(small + large, reverse=True)) == Partition([4, 3, 3, 1])
    with pytest.raises(ParamOutOfRange):
        split_at(Partition([1]), 1)


def test_enumerate_bounded():
    assert list(enumerate_bounded(0, 5)) == [EMPTY]
    six = list(enumerate_bounded(2, 2))
    assert len(six) == 6
    assert len(set(six)) == 6
    assert set(six) == {
        EMPTY,
        Partition([1]),
        Partition([2]),
        Partition([1, 1]),
        Partition([2, 1]),
        Partition([2, 2]),
    }
    assert len(list(enumerate_bounded(1, 7))) == 8  # columns 1^k, k = 0..7


def test_step_enumerations_match_relations():
    for lam in enumerate_bounded(4, 3):
        if lam.size > 7:
            continue
        assert set(hstrip_under(lam)) == {
            mu for mu in enumerate_bounded(4, 3) if interlace(mu, lam)
        }
        assert set(vstrip_under(lam)) == {
            mu for mu in enumerate_bounded(4, 3) if column_interlace(mu, lam)
        }
        assert set(hstrip_over(lam, 5)) == {
            nu for nu in enumerate_bounded(5, 4) if interlace(lam, nu)
        }
        assert set(vstrip_over(lam, 5)) == {
            nu
            for nu in enumerate_bounded(5, 5)
            if column_interlace(lam, nu) and nu.ell <= 5
        }
        assert set(subdiagrams_between(EMPTY, lam)) == {
            mu for mu in enumerate_bounded(4, 3) if lam.contains(mu)
        }


def test_partitions_of_containing():
    for n in range(9):
        for base in [EMPTY, Partition([2, 1]), Partition([3, 3])]:
            got = sorted(partitions_of_containing(n, base))
            want = sorted(nu for nu in partitions_of(n) if nu.contains(base))
            assert got == want


def test_json_round_trip():
    lam = Partition([4, 4, 2, 1])
    assert Partition.from_json(lam.to_json()) == lam
    assert lam.to_json() == [4, 4, 2, 1]
