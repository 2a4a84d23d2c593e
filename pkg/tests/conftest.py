import math

import pytest

from framelets.lattice import IntMatrix
from framelets.lawton import Mask
from framelets.partition import PartitionData
from published_filters import PUBLISHED_SET1, PUBLISHED_SET2

SQRT2_HALF = math.sqrt(2.0) / 2.0


def table_mask(table) -> Mask:
    support = tuple(sorted(table))
    return Mask(dim=3, support=support,
                coeffs=tuple(float(table[n]) for n in support))


# -- dimension 1: the plain dyadic system --------------------------------


@pytest.fixture
def haar1_pd():
    two = IntMatrix.from_rows([[2]])
    one = IntMatrix.identity(1)
    return PartitionData(A0=two, A=two, S=one, S_inv=one, ell=(1,), q=(1,))


@pytest.fixture
def haar1_mask():
    return Mask(dim=1, support=((0,), (1,)), coeffs=(SQRT2_HALF, SQRT2_HALF))


@pytest.fixture
def daub4_mask():
    s = math.sqrt(3.0)
    scale = 4.0 * math.sqrt(2.0)
    return Mask(
        dim=1,
        support=((0,), (1,), (2,), (3,)),
        coeffs=tuple(c / scale for c in (1 + s, 3 + s, 3 - s, 1 - s)),
    )


# -- dimension 3, determinant +2 ------------------------------------------
# The cyclic-permutation-with-doubling dilation.  Its own lattice
# partition uses the third unit vector for both the coset shift and the
# parity functional, and the two-tap filter on {0, e3} has the unit cube
# as an exact cascade fixed point.


CYCLIC_A0 = [[0, 1, 0], [0, 0, 1], [2, 0, 0]]


@pytest.fixture
def cyclic_a0():
    return IntMatrix.from_rows(CYCLIC_A0)


@pytest.fixture
def haar3_pd(cyclic_a0):
    one = IntMatrix.identity(3)
    return PartitionData(A0=cyclic_a0, A=cyclic_a0, S=one, S_inv=one,
                         ell=(0, 0, 1), q=(0, 0, 1))


@pytest.fixture
def haar3_mask():
    return Mask(dim=3, support=((0, 0, 0), (0, 0, 1)),
                coeffs=(SQRT2_HALF, SQRT2_HALF))


@pytest.fixture
def cyclic_published_pd(cyclic_a0):
    """The reduction tuple published alongside the cyclic dilation."""
    return PartitionData(
        A0=cyclic_a0,
        A=IntMatrix.from_rows([[0, 2, -1], [0, 0, 1], [1, 1, 0]]),
        S=IntMatrix.from_rows([[-1, 0, 1], [1, 0, 0], [0, 1, 0]]),
        S_inv=IntMatrix.from_rows([[0, 1, 0], [0, 0, 1], [1, 1, 0]]),
        ell=(1, 0, 0),
        q=(1, 1, 0),
    )


# -- dimension 3, determinant -2 -------------------------------------------


MIXING_A = [[-2, 1, -2], [1, 0, 0], [2, 0, 2]]


@pytest.fixture
def mixing_pd():
    a = IntMatrix.from_rows(MIXING_A)
    one = IntMatrix.identity(3)
    return PartitionData(A0=a, A=a, S=one, S_inv=one,
                         ell=(0, 0, 1), q=(0, 0, 1))


@pytest.fixture
def set1_mask():
    return table_mask(PUBLISHED_SET1)


@pytest.fixture
def set2_mask():
    return table_mask(PUBLISHED_SET2)
