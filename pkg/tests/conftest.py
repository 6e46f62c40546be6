from fractions import Fraction

import mpmath as mp
import pytest

from vertexlab.qkernel import QParams


def pytest_configure(config):
    mp.mp.dps = 50


@pytest.fixture
def qp():
    """The workhorse parameter point q = 1/2, s = -1/2."""
    return QParams(Fraction(1, 2), Fraction(-1, 2))


@pytest.fixture
def qp_gentle():
    """A point with fast tail decay, for infinite-sum checks."""
    return QParams(Fraction(1, 2), Fraction(-1, 8))
