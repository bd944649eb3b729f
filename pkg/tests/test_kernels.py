import numpy as np
import pytest

from repgeom.errors import NonFinite
from repgeom.kernels import (
    KernelSpec,
    gram,
    linear_kernel,
    median_length_scale,
    squared_exponential_kernel,
)

from conftest import rand


def test_linear_gram_identity():
    assert np.allclose(gram(np.eye(2)), np.eye(2))


def test_linear_gram_hand_example():
    x = np.array([[1.0, 2.0], [3.0, 4.0]])
    assert np.allclose(gram(x), np.array([[5.0, 11.0], [11.0, 25.0]]))


def test_se_kernel_matches_direct_evaluation():
    x = rand(0, 5, 3)
    # Direct double loop with tau = median pairwise distance.
    dists = [np.linalg.norm(x[i] - x[j]) for i in range(5) for j in range(i + 1, 5)]
    tau = np.median(dists)
    expected = np.array(
        [[np.exp(-np.linalg.norm(x[i] - x[j]) ** 2 / tau**2) for j in range(5)] for i in range(5)]
    )
    got = gram(x, squared_exponential_kernel())
    assert np.allclose(got, expected, atol=1e-12)


def test_se_kernel_fixed_length_scale():
    x = rand(1, 4, 2)
    got = gram(x, squared_exponential_kernel(2.5))
    expected = np.exp(-np.array([[np.linalg.norm(x[i] - x[j]) ** 2 for j in range(4)] for i in range(4)]) / 2.5**2)
    assert np.allclose(got, expected, atol=1e-12)


def test_gram_positive_semidefinite():
    for seed, spec in [(2, linear_kernel()), (3, squared_exponential_kernel())]:
        g = gram(rand(seed, 10, 4), spec)
        vals = np.linalg.eigvalsh(g)
        assert vals.min() >= -1e-10 * np.trace(g)


def test_constant_rows_give_all_ones_se_kernel():
    x = np.ones((6, 3)) * 2.7
    assert np.array_equal(gram(x, squared_exponential_kernel()), np.ones((6, 6)))


def test_median_fallback_to_mean():
    # Three duplicate pairs out of three distinct rows repeated: median 0, mean > 0.
    base = np.array([[0.0, 0.0], [1.0, 0.0]])
    x = np.vstack([base, base, base])
    tau = median_length_scale(x)
    assert tau > 0.0


def test_nonfinite_rejected():
    x = np.array([[1.0, np.nan], [0.0, 1.0]])
    with pytest.raises(NonFinite):
        gram(x)


def test_kernel_spec_validation():
    with pytest.raises(ValueError):
        KernelSpec(kind="polynomial")
    with pytest.raises(ValueError):
        KernelSpec(kind="linear", length_scale=1.0)
    with pytest.raises(ValueError):
        KernelSpec(kind="squared_exponential", length_scale=-1.0)
