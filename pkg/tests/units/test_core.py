import numpy as np
import pytest

from mimodet import core
from mimodet.core import CountingConvention, OpCount
from mimodet.exceptions import DimensionMismatch, NumericalOverflow

# (a, b, a*b)
cmul_cases = [
    (1 + 2j, 3 + 4j, -5 + 10j),
    (1j, 1j, -1 + 0j),
    (2 + 0j, 0.5 + 0j, 1 + 0j),
    (0j, 7 - 3j, 0j),
]


@pytest.mark.parametrize("a,b,expected", cmul_cases)
def test_cmul(a, b, expected):
    acc = OpCount()
    assert core.cmul(a, b, acc) == expected
    assert (acc.realMul, acc.add, acc.sub) == (4, 1, 1)


def test_rcmul():
    acc = OpCount()
    assert core.rcmul(2.0, 1 - 1j, acc) == 2 - 2j
    assert acc.realMul == 2
    assert (acc.add, acc.sub) == (0, 0)


def test_dot_h_conjugates_first_argument():
    acc = OpCount()
    assert core.dotH(np.array([1j, 1]), np.array([1j, 1]), acc) == 2
    assert acc.realMul == 8
    assert acc.add == 2 + 2  # two products and one complex addition


def test_dot_h_length_mismatch():
    with pytest.raises(DimensionMismatch):
        core.dotH(np.ones(3, complex), np.ones(4, complex), OpCount())


def test_norm_sq():
    acc = OpCount()
    assert core.normSq(np.array([3 + 4j, 0j]), acc) == 25.0
    assert acc.realMul == 8


def test_matmul_counts_every_product(rng):
    A = rng.standard_normal((3, 5)) + 1j * rng.standard_normal((3, 5))
    B = rng.standard_normal((5, 2)) + 1j * rng.standard_normal((5, 2))
    acc = OpCount()
    np.testing.assert_allclose(core.matmul(A, B, acc), A @ B)
    assert acc.realMul == 4 * 3 * 5 * 2

    acc = OpCount()
    core.matmul(A, B[:, 0], acc)
    assert acc.realMul == 4 * 3 * 5


def test_matmul_shape_mismatch():
    with pytest.raises(DimensionMismatch):
        core.matmul(np.ones((2, 3), complex), np.ones((2, 2), complex), OpCount())


def test_hermitian_is_free():
    A = np.array([[1 + 1j, 2], [3j, 4]])
    np.testing.assert_array_equal(core.hermitian(A), np.array([[1 - 1j, -3j], [2, 4]]))


def test_op_count_arithmetic():
    a = OpCount(sqrt=1, reciprocal=2, realMul=3, add=4, sub=5)
    b = OpCount(sqrt=1, reciprocal=1, realMul=1, add=1, sub=1)
    total = a + b
    assert total == OpCount(sqrt=2, reciprocal=3, realMul=4, add=5, sub=6)

    a += b
    assert a == total
    assert a.toJson() == {"sqrt": 2, "reciprocal": 3, "real_mul": 4, "add": 5, "sub": 6}


def test_convention_changes_tallies():
    acc = OpCount(convention=CountingConvention(complexMul=3))
    core.cmul(1j, 1j, acc)
    assert acc.realMul == 3


def test_non_finite_results_raise():
    with pytest.raises(NumericalOverflow):
        core.cmul(complex(1e308, 0), complex(1e308, 0), OpCount())


def test_as_cvector_rejects_matrices():
    with pytest.raises(DimensionMismatch):
        core.asCVector(np.ones((2, 2)))


def test_cmul_matches_integer_arithmetic(rng):
    acc = OpCount()
    for a, b, c, d in rng.integers(-1000, 1000, size=(200, 4)):
        product = core.cmul(complex(a, b), complex(c, d), acc)
        assert product == complex(a * c - b * d, a * d + b * c)
    assert acc.realMul == 4 * 200


def test_hermitian_involution_and_product(rng):
    A = rng.standard_normal((4, 6)) + 1j * rng.standard_normal((4, 6))
    B = rng.standard_normal((6, 3)) + 1j * rng.standard_normal((6, 3))
    np.testing.assert_array_equal(core.hermitian(core.hermitian(A)), A)

    left = core.hermitian(A @ B)
    right = core.hermitian(B) @ core.hermitian(A)
    assert np.max(np.abs(left - right)) <= 1e-12
