"""Kernels for Gram-matrix embeddings."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NonFinite
from .linalg import check_finite, pairwise_sq_distances, symmetrize

LINEAR = "linear"
SQUARED_EXPONENTIAL = "squared_exponential"


@dataclass(frozen=True)
class KernelSpec:
    """Kernel used to build an m x m Gram matrix from row vectors.

    ``length_scale`` applies to the squared-exponential kernel only;
    ``None`` selects the median heuristic (the median pairwise Euclidean
    distance between rows, recomputed per matrix).
    """

    kind: str = LINEAR
    length_scale: float | None = None

    def __post_init__(self):
        if self.kind not in (LINEAR, SQUARED_EXPONENTIAL):
            raise ValueError(f"unknown kernel kind {self.kind!r}")
        if self.length_scale is not None:
            if self.kind == LINEAR:
                raise ValueError("length_scale only applies to the squared-exponential kernel")
            if not self.length_scale > 0:
                raise ValueError("length_scale must be positive")


def linear_kernel() -> KernelSpec:
    return KernelSpec(kind=LINEAR)


def squared_exponential_kernel(length_scale: float | None = None) -> KernelSpec:
    return KernelSpec(kind=SQUARED_EXPONENTIAL, length_scale=length_scale)


def median_length_scale(x: np.ndarray) -> float:
    """Median of the m(m-1)/2 pairwise Euclidean row distances.

    Falls back to the mean distance when the median is zero (more than
    half the pairs are duplicates).  Returns 0.0 only when every pair of
    rows coincides, in which case the kernel value is 1 for every pair
    regardless of the length scale.
    """
    d = np.sqrt(pairwise_sq_distances(x))
    iu = np.triu_indices(d.shape[0], k=1)
    pair = d[iu]
    if pair.size == 0:
        return 0.0
    tau = float(np.median(pair))
    if tau == 0.0:
        tau = float(np.mean(pair))
    return tau


def gram(x: np.ndarray, spec: KernelSpec = KernelSpec()) -> np.ndarray:
    """Gram matrix of row inner products, optionally through a kernel.

    The squared-exponential kernel is k(a, b) = exp(-||a-b||^2 / tau^2).
    """
    x = np.asarray(x, dtype=float)
    check_finite(x, "representation matrix")
    if spec.kind == LINEAR:
        return symmetrize(x @ x.T)
    d2 = pairwise_sq_distances(x)
    if spec.length_scale is not None:
        tau = spec.length_scale
    else:
        tau = median_length_scale(x)
        if tau == 0.0:
            # All rows identical: exp(-0/tau^2) = 1 for any tau.
            return np.ones_like(d2)
    g = np.exp(-d2 / (tau * tau))
    if not np.all(np.isfinite(g)):
        raise NonFinite("kernel matrix contains non-finite entries")
    return symmetrize(g)
