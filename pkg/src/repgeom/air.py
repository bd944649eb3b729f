"""Congruence-invariant geometry on symmetric positive definite matrices.

Representations embed as SPD matrices (kernel Gram plus ridge, or
padded/projected covariance plus ridge); distance is the Riemannian
metric invariant under P -> A^T P A for invertible A, with closed-form
geodesics, log/exp maps, and base-point-dependent inner products.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import IllConditioned, NotPositiveDefinite
from .kernels import gram
from .linalg import check_finite, frobenius_inner, principal_axes, sym_eigh_desc, symmetrize
from .types import AIR, GRAM_EMBEDDING, AirParams, ManifoldPoint, TangentVector

DEGENERATE_DISTANCE = 1e-8
_SPD_FLOOR = 1e-12
_MAX_CONDITION = 1e12


@dataclass(frozen=True, eq=False)
class SpdEigen:
    """Eigendecomposition of an SPD matrix, eigenvalues descending."""

    eigenvectors: np.ndarray
    eigenvalues: np.ndarray

    def apply(self, fn) -> np.ndarray:
        """V f(diag) V^T with f applied elementwise to the eigenvalues."""
        v = self.eigenvectors
        return symmetrize((v * fn(self.eigenvalues)) @ v.T)


def spd_eigen(p: np.ndarray, require_spd: bool = True) -> SpdEigen:
    """Symmetrized eigendecomposition with positivity and conditioning checks."""
    vals, vecs = sym_eigh_desc(np.asarray(p, dtype=float))
    if require_spd:
        if vals[-1] <= _SPD_FLOOR:
            raise NotPositiveDefinite(
                f"matrix has eigenvalue {vals[-1]:.3e} below the SPD floor"
            )
        if vals[0] / vals[-1] > _MAX_CONDITION:
            raise IllConditioned(
                f"condition number {vals[0] / vals[-1]:.3e} exceeds supported range"
            )
    return SpdEigen(eigenvectors=vecs, eigenvalues=vals)


def spd_pow(p: np.ndarray, k: float) -> np.ndarray:
    """Matrix power through elementwise powers of the eigenvalues."""
    eig = spd_eigen(p, require_spd=k < 0 or (k != int(k)))
    return eig.apply(lambda v: np.power(np.maximum(v, 0.0) if k >= 0 else v, k))


def spd_exp(p: np.ndarray) -> np.ndarray:
    """Matrix exponential of a symmetric matrix."""
    eig = spd_eigen(p, require_spd=False)
    return eig.apply(np.exp)


def spd_log(p: np.ndarray) -> np.ndarray:
    """Matrix logarithm of an SPD matrix."""
    return spd_eigen(p).apply(np.log)


def embed(x: np.ndarray, params: AirParams = AirParams()) -> ManifoldPoint:
    """Embed an m x n representation matrix as an SPD point.

    Gram embedding: kernel Gram matrix plus epsilon * I (the ridge keeps
    duplicate rows, e.g. one-hot labels, positive definite).  Covariance
    embedding: zero-pad or project onto the top p principal components as
    in the shape embedding, but without whitening, then covariance plus
    epsilon * I.
    """
    x = np.asarray(x, dtype=float)
    check_finite(x, "representation matrix")
    m = x.shape[0]
    if params.embedding == GRAM_EMBEDDING:
        payload = gram(x, params.kernel) + params.epsilon * np.eye(m)
    else:
        xc = x - x.mean(axis=0, keepdims=True)
        if x.shape[1] <= params.p:
            z = np.concatenate([xc, np.zeros((m, params.p - x.shape[1]))], axis=1)
        else:
            _, axes = principal_axes((xc.T @ xc) / m, params.p)
            z = xc @ axes
        payload = (z.T @ z) / (m - 1) + params.epsilon * np.eye(params.p)
    return ManifoldPoint(AIR, symmetrize(payload), m, params)


def _whitened(p: ManifoldPoint, q_payload: np.ndarray) -> np.ndarray:
    """P^{-1/2} Q P^{-1/2} computed through the eigendecomposition of P."""
    eig = spd_eigen(p.payload)
    inv_sqrt = eig.apply(lambda v: 1.0 / np.sqrt(v))
    return symmetrize(inv_sqrt @ q_payload @ inv_sqrt)


def distance(p: ManifoldPoint, q: ManifoldPoint) -> float:
    """sqrt(sum_i log(d_i)^2) over the eigenvalues of P^{-1/2} Q P^{-1/2}."""
    d = np.linalg.eigvalsh(_whitened(p, q.payload))
    if d[0] <= 0.0:
        raise NotPositiveDefinite("second argument is not positive definite")
    return float(np.sqrt(np.sum(np.log(d) ** 2)))


def geodesic(p: ManifoldPoint, q: ManifoldPoint, t: float) -> ManifoldPoint:
    """P^{1/2} (P^{-1/2} Q P^{-1/2})^t P^{1/2}, symmetrized against drift."""
    if distance(p, q) <= DEGENERATE_DISTANCE:
        return p
    eig = spd_eigen(p.payload)
    sqrt_p = eig.apply(np.sqrt)
    mid = spd_pow(_whitened(p, q.payload), t)
    return p.with_payload(symmetrize(sqrt_p @ mid @ sqrt_p))


def log_map(p: ManifoldPoint, q: ManifoldPoint) -> TangentVector:
    if distance(p, q) <= DEGENERATE_DISTANCE:
        return TangentVector(p, np.zeros_like(p.payload))
    eig = spd_eigen(p.payload)
    sqrt_p = eig.apply(np.sqrt)
    mid = spd_log(_whitened(p, q.payload))
    return TangentVector(p, symmetrize(sqrt_p @ mid @ sqrt_p))


def exp_map(p: ManifoldPoint, w: TangentVector) -> ManifoldPoint:
    eig = spd_eigen(p.payload)
    sqrt_p = eig.apply(np.sqrt)
    mid = spd_exp(_whitened(p, w.direction))
    return p.with_payload(symmetrize(sqrt_p @ mid @ sqrt_p))


def inner_product(p: ManifoldPoint, w: TangentVector, v: TangentVector) -> float:
    """Base-point inner product tr(P^{-1} W P^{-1} V).

    Computed as the Frobenius product of the whitened tangents
    P^{-1/2} W P^{-1/2} and P^{-1/2} V P^{-1/2}, which keeps the form
    manifestly symmetric and positive definite and makes the norm of
    ``log_map(p, q)`` equal to ``distance(p, q)``.
    """
    return frobenius_inner(_whitened(p, w.direction), _whitened(p, v.direction))
