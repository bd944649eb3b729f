"""Angular similarity of centered, normalized Gram matrices.

Representations embed as unit-Frobenius-norm, doubly centered Gram
matrices; distance is arc length on that hypersphere, geodesics are
great circles (SLERP), and tangent vectors are symmetric matrices with
the Frobenius inner product.
"""

from __future__ import annotations

import numpy as np

from .errors import AntipodalPoints, ZeroAfterCentering
from .kernels import KernelSpec, gram
from .linalg import (
    check_finite,
    frobenius_inner,
    frobenius_norm,
    slerp,
    symmetrize,
    unit_sphere_distance,
)
from .types import ANGULAR_CKA, CkaParams, ManifoldPoint, TangentVector

DEGENERATE_DISTANCE = 1e-8
ANTIPODAL_SLACK = 1e-6
_ZERO_NORM = 1e-12


def center_gram(g: np.ndarray) -> np.ndarray:
    """Apply the centering matrix on both sides via mean subtraction.

    Equivalent to H G H with H = I - (1/m) 11^T, without materializing H.
    """
    row_means = g.mean(axis=1, keepdims=True)
    col_means = g.mean(axis=0, keepdims=True)
    total = g.mean()
    return g - row_means - col_means + total


def center_normalize(g: np.ndarray, params: CkaParams = CkaParams()) -> ManifoldPoint:
    """Centered, unit-Frobenius-norm Gram matrix as a sphere point."""
    g = symmetrize(np.asarray(g, dtype=float))
    check_finite(g, "gram matrix")
    centered = center_gram(g)
    norm = frobenius_norm(centered)
    if norm <= _ZERO_NORM:
        raise ZeroAfterCentering("gram matrix vanishes after centering (constant representation)")
    return ManifoldPoint(ANGULAR_CKA, centered / norm, g.shape[0], params)


def embed(x: np.ndarray, kernel: KernelSpec = KernelSpec()) -> ManifoldPoint:
    """Embed an m x n representation matrix on the Gram hypersphere."""
    return center_normalize(gram(x, kernel), CkaParams(kernel))


def distance(p: ManifoldPoint, q: ManifoldPoint) -> float:
    """Arc length: arccos of the Frobenius inner product, in [0, pi]."""
    return unit_sphere_distance(p.payload, q.payload)


def geodesic(p: ManifoldPoint, q: ManifoldPoint, t: float) -> ManifoldPoint:
    omega = distance(p, q)
    if omega <= DEGENERATE_DISTANCE:
        return p
    out = slerp(p.payload, q.payload, t, omega)
    # Re-normalize so repeated composition cannot drift off the sphere.
    return p.with_payload(out / frobenius_norm(out))


def log_map(p: ManifoldPoint, q: ManifoldPoint) -> TangentVector:
    omega = distance(p, q)
    if omega <= DEGENERATE_DISTANCE:
        return TangentVector(p, np.zeros_like(p.payload))
    if abs(omega - np.pi) <= ANTIPODAL_SLACK:
        raise AntipodalPoints("log map is not unique between antipodal sphere points")
    c = frobenius_inner(p.payload, q.payload)
    w = q.payload - c * p.payload
    w_norm = frobenius_norm(w)
    return TangentVector(p, (omega / w_norm) * w)


def exp_map(p: ManifoldPoint, w: TangentVector) -> ManifoldPoint:
    norm = frobenius_norm(w.direction)
    if norm <= DEGENERATE_DISTANCE:
        return p
    out = np.cos(norm) * p.payload + (np.sin(norm) / norm) * w.direction
    return p.with_payload(out / frobenius_norm(out))


def hsic_biased(gx: np.ndarray, gy: np.ndarray) -> float:
    """Biased HSIC estimator tr(HGxH HGyH) up to a constant factor.

    Kept as a library utility; the estimator's normalization cancels in
    alignment ratios.
    """
    return frobenius_inner(center_gram(gx), center_gram(gy))
