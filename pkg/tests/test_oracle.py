import numpy as np
import pytest

from qmatops.errors import DimensionError
from qmatops.oracle import compare, oracle_add, oracle_bilinear, oracle_matmul

from conftest import GOLDEN_A1, GOLDEN_A2, GOLDEN_PRODUCT


def test_bilinear_examples():
    assert oracle_bilinear([1, 0], [0, 1]) == 0
    assert oracle_bilinear([1, 1j], [1, 1j]) == 0
    assert oracle_bilinear([3, 4], [4, 3]) == 24
    with pytest.raises(DimensionError):
        oracle_bilinear([1], [1, 2])


def test_matmul_and_add_examples():
    np.testing.assert_allclose(oracle_matmul(GOLDEN_A1, GOLDEN_A2), GOLDEN_PRODUCT, atol=1e-15)
    A = np.arange(4.0).reshape(2, 2)
    np.testing.assert_array_equal(oracle_add(A, np.zeros((2, 2))), A)
    np.testing.assert_array_equal(oracle_matmul(np.eye(2), A), A)
    with pytest.raises(DimensionError):
        oracle_matmul(np.eye(2), np.eye(3))
    with pytest.raises(DimensionError):
        oracle_add(np.eye(2), np.eye(3))


def test_oracle_matmul_against_numpy(rng):
    A, B = rng.normal(size=(3, 5)), rng.normal(size=(5, 2))
    np.testing.assert_allclose(oracle_matmul(A, B), A @ B, atol=1e-12)


def test_compare_examples():
    A = np.array([[1.0, 0.5], [0.0, 2.0]])
    rep = compare(A, A, 1e-9)
    assert rep.passed and rep.max_abs_error == 0 and rep.max_rel_error == 0
    assert not compare(A + 1e-6, A, 1e-9).passed
    assert compare(A + 1e-12, A, 1e-9).passed
    with pytest.raises(DimensionError):
        compare(A, A[0], 1e-9)


def test_compare_near_zero_reference_uses_floor():
    assert compare([1e-13], [0.0], 1e-9).max_rel_error == pytest.approx(0.1)
