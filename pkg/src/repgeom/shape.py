"""Shape metrics on zero-mean embedded point clouds.

Representations are mapped to a common m x p pre-shape space (zero
column means, optional partial whitening), then compared after the best
orthogonal alignment.  The angular variant measures the aligned angle
between pre-shapes; the Euclidean variant measures the mean row-wise
displacement after alignment.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import AntipodalPoints, ShapeMismatch, SingularSylvester, ZeroNormShape
from .linalg import (
    EIGENVALUE_FLOOR,
    check_finite,
    frobenius_inner,
    frobenius_norm,
    principal_axes,
    slerp,
    sym_eigh_desc,
    unit_sphere_distance,
)
from .types import ANGULAR_SHAPE, EUCLIDEAN_SHAPE, ManifoldPoint, ShapeParams, TangentVector

DEGENERATE_DISTANCE = 1e-8
ANTIPODAL_SLACK = 1e-6
_ZERO_NORM = 1e-12


@dataclass(frozen=True, eq=False)
class ProcrustesAlignment:
    """Optimal orthogonal alignment of one pre-shape onto another."""

    rotation: np.ndarray
    aligned_inner_product: float


def partial_whiten(z: np.ndarray, alpha: float) -> np.ndarray:
    """Interpolate between the identity (alpha=1) and ZCA whitening (alpha=0).

    Covariance directions with eigenvalues below the floor are excluded
    from the inverse square root and kept at the alpha-scaled identity,
    so rank-deficient inputs (one-hot labels, zero padding) embed cleanly.
    """
    cov = (z.T @ z) / z.shape[0]
    vals, vecs = sym_eigh_desc(cov)
    scale = np.full(vals.shape, alpha)
    keep = vals > EIGENVALUE_FLOOR
    scale[keep] = alpha + (1.0 - alpha) / np.sqrt(vals[keep])
    return z @ (vecs * scale) @ vecs.T


def embed(
    x: np.ndarray,
    params: ShapeParams = ShapeParams(),
    metric: str = ANGULAR_SHAPE,
) -> ManifoldPoint:
    """Embed an m x n representation matrix into pre-shape space.

    Columns are mean-centered, then zero-padded up to p (n <= p) or
    projected onto the top p principal components (n > p), and finally
    partially whitened.
    """
    if metric not in (ANGULAR_SHAPE, EUCLIDEAN_SHAPE):
        raise ValueError(f"unknown shape metric {metric!r}")
    x = np.asarray(x, dtype=float)
    check_finite(x, "representation matrix")
    if x.shape[0] < 2:
        raise ShapeMismatch("need at least two rows to embed a shape")
    m, n = x.shape
    xc = x - x.mean(axis=0, keepdims=True)
    if n <= params.p:
        z = np.concatenate([xc, np.zeros((m, params.p - n))], axis=1)
    else:
        _, axes = principal_axes((xc.T @ xc) / m, params.p)
        z = xc @ axes
    return ManifoldPoint(metric, partial_whiten(z, params.alpha), m, params)


def procrustes_align(px: ManifoldPoint, qy: ManifoldPoint) -> ProcrustesAlignment:
    """Orthogonal matrix R minimizing ||px - qy R||_F.

    Closed form R = U V^T from the SVD U S V^T of qy^T px; R ranges over
    the full orthogonal group (reflections allowed).
    """
    if px.payload.shape != qy.payload.shape:
        raise ShapeMismatch(
            f"pre-shape dimensions differ: {px.payload.shape} vs {qy.payload.shape}"
        )
    u, s, vt = np.linalg.svd(qy.payload.T @ px.payload)
    return ProcrustesAlignment(rotation=u @ vt, aligned_inner_product=float(s.sum()))


def _aligned(px: ManifoldPoint, qy: ManifoldPoint) -> np.ndarray:
    return qy.payload @ procrustes_align(px, qy).rotation


def _norms(px: ManifoldPoint, qy: ManifoldPoint) -> tuple[float, float]:
    a = frobenius_norm(px.payload)
    b = frobenius_norm(qy.payload)
    if a <= _ZERO_NORM or b <= _ZERO_NORM:
        raise ZeroNormShape("pre-shape has zero norm; angular quantities are undefined")
    return a, b


def angular_distance(px: ManifoldPoint, qy: ManifoldPoint) -> float:
    """arccos of the normalized, optimally aligned inner product."""
    a, b = _norms(px, qy)
    aligned = _aligned(px, qy)
    return unit_sphere_distance(px.payload / a, aligned / b)


def euclidean_distance(px: ManifoldPoint, qy: ManifoldPoint) -> float:
    """Mean Euclidean row displacement after optimal alignment."""
    diff = px.payload - _aligned(px, qy)
    return float(np.mean(np.linalg.norm(diff, axis=1)))


def distance(px: ManifoldPoint, qy: ManifoldPoint) -> float:
    if px.metric == ANGULAR_SHAPE:
        return angular_distance(px, qy)
    return euclidean_distance(px, qy)


def geodesic(px: ManifoldPoint, qy: ManifoldPoint, t: float) -> ManifoldPoint:
    """Geodesic after alignment: SLERP (angular) or linear blend (Euclidean).

    In the angular case the aligned endpoint is rescaled to the base
    norm so the path stays on a common sphere; the endpoint at t=1 is
    equivalent to qy (distance zero) though not identical to it.
    """
    omega = distance(px, qy)
    if omega <= DEGENERATE_DISTANCE:
        return px
    aligned = _aligned(px, qy)
    if px.metric == EUCLIDEAN_SHAPE:
        return px.with_payload((1.0 - t) * px.payload + t * aligned)
    a, b = _norms(px, qy)
    out = slerp(px.payload, aligned * (a / b), t, omega)
    return px.with_payload(out * (a / frobenius_norm(out)))


def log_map(px: ManifoldPoint, qy: ManifoldPoint) -> TangentVector:
    """Horizontal tangent at px pointing to qy.

    Optimal alignment makes the returned direction horizontal: its
    vertical component under ``tangent_split`` vanishes.
    """
    omega = distance(px, qy)
    if omega <= DEGENERATE_DISTANCE:
        return TangentVector(px, np.zeros_like(px.payload))
    aligned = _aligned(px, qy)
    if px.metric == EUCLIDEAN_SHAPE:
        return TangentVector(px, aligned - px.payload)
    if abs(omega - np.pi) <= ANTIPODAL_SLACK:
        raise AntipodalPoints("log map is not unique between antipodal pre-shapes")
    a, b = _norms(px, qy)
    u = px.payload / a
    v = aligned / b
    w = v - frobenius_inner(u, v) * u
    return TangentVector(px, (omega / frobenius_norm(w)) * w)


def exp_map(px: ManifoldPoint, w: TangentVector) -> ManifoldPoint:
    norm = frobenius_norm(w.direction)
    if norm <= DEGENERATE_DISTANCE:
        return px
    if px.metric == EUCLIDEAN_SHAPE:
        return px.with_payload(px.payload + w.direction)
    a = frobenius_norm(px.payload)
    if a <= _ZERO_NORM:
        raise ZeroNormShape("pre-shape has zero norm; angular quantities are undefined")
    out = np.cos(norm) * (px.payload / a) + (np.sin(norm) / norm) * w.direction
    return px.with_payload(out * (a / frobenius_norm(out)))


def sylvester_coefficient(px: ManifoldPoint, w: TangentVector) -> np.ndarray:
    """Antisymmetric A with (X^T X) A + A (X^T X) = X^T W - W^T X.

    Solved spectrally through the eigendecomposition of X^T X, which
    also handles rank-deficient pre-shapes: component pairs whose
    eigenvalue sum is below the floor carry no vertical motion and are
    set to zero (their right-hand side vanishes for valid tangents).
    """
    x = px.payload
    s = x.T @ x
    rhs = x.T @ w.direction - w.direction.T @ x
    vals, vecs = sym_eigh_desc(s)
    rhs_r = vecs.T @ rhs @ vecs
    denom = vals[:, None] + vals[None, :]
    floor = EIGENVALUE_FLOOR * max(1.0, float(vals[0]) if vals.size else 1.0)
    solvable = denom > floor
    blocked = ~solvable & (np.abs(rhs_r) > 1e-10 * max(frobenius_norm(rhs), 1e-300))
    if np.any(blocked):
        raise SingularSylvester("vertical-component system has no solution for this tangent")
    coeff = np.zeros_like(rhs_r)
    coeff[solvable] = rhs_r[solvable] / denom[solvable]
    return vecs @ coeff @ vecs.T


def tangent_split(px: ManifoldPoint, w: TangentVector) -> tuple[TangentVector, TangentVector]:
    """Split a tangent into vertical (alignment-equivalent) and horizontal parts.

    The vertical subspace at X is {X A : A antisymmetric}; the returned
    vertical part is the orthogonal projection of w onto it, rescaled per
    its inner product with w so the two parts are exactly complementary
    and mutually orthogonal.
    """
    vert0 = px.payload @ sylvester_coefficient(px, w)
    vv = frobenius_inner(vert0, vert0)
    if vv > 0.0:
        vert = (frobenius_inner(vert0, w.direction) / vv) * vert0
    else:
        vert = np.zeros_like(vert0)
    return TangentVector(px, vert), TangentVector(px, w.direction - vert)
