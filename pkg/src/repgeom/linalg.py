"""Dense linear-algebra helpers shared by the metric modules."""

from __future__ import annotations

import numpy as np

from .errors import NonFinite

EIGENVALUE_FLOOR = 1e-12


def check_finite(a: np.ndarray, name: str = "matrix") -> None:
    if not np.all(np.isfinite(a)):
        raise NonFinite(f"{name} contains NaN or infinite entries")


def symmetrize(a: np.ndarray) -> np.ndarray:
    return 0.5 * (a + a.T)


def frobenius_inner(a: np.ndarray, b: np.ndarray) -> float:
    return float(np.sum(a * b))


def frobenius_norm(a: np.ndarray) -> float:
    return float(np.linalg.norm(a))


def sym_eigh_desc(a: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Eigendecomposition of a symmetric matrix, eigenvalues descending."""
    vals, vecs = np.linalg.eigh(symmetrize(a))
    order = np.argsort(vals)[::-1]
    return vals[order], vecs[:, order]


def fix_component_signs(vecs: np.ndarray) -> np.ndarray:
    """Make each column's largest-magnitude entry positive.

    Gives deterministic principal components across runs and platforms.
    """
    out = vecs.copy()
    for j in range(out.shape[1]):
        k = int(np.argmax(np.abs(out[:, j])))
        if out[k, j] < 0:
            out[:, j] = -out[:, j]
    return out


def principal_axes(cov: np.ndarray, k: int | None = None) -> tuple[np.ndarray, np.ndarray]:
    """Sign-fixed eigenvectors of a covariance matrix, variance descending.

    Returns (eigenvalues, eigenvectors); eigenvectors are unit columns.
    """
    vals, vecs = sym_eigh_desc(cov)
    vecs = fix_component_signs(vecs)
    if k is not None:
        vals, vecs = vals[:k], vecs[:, :k]
    return vals, vecs


def unit_sphere_distance(u: np.ndarray, v: np.ndarray) -> float:
    """Arc length between unit-Frobenius-norm matrices on the hypersphere.

    Uses the chord form 2*asin(||v-u||/2) away from the antipode, which is
    well conditioned near zero separation where arccos loses half the
    significant digits.
    """
    c = frobenius_inner(u, v)
    if c >= -0.5:
        half_chord = 0.5 * frobenius_norm(v - u)
        return 2.0 * float(np.arcsin(min(half_chord, 1.0)))
    half_chord = 0.5 * frobenius_norm(v + u)
    return float(np.pi) - 2.0 * float(np.arcsin(min(half_chord, 1.0)))


def slerp(u: np.ndarray, v: np.ndarray, t: float, omega: float) -> np.ndarray:
    """Spherical linear interpolation between unit-norm matrices."""
    s = np.sin(omega)
    return (np.sin((1.0 - t) * omega) / s) * u + (np.sin(t * omega) / s) * v


def pairwise_sq_distances(x: np.ndarray) -> np.ndarray:
    """m x m matrix of squared Euclidean distances between rows."""
    sq = np.sum(x * x, axis=1)
    d2 = sq[:, None] + sq[None, :] - 2.0 * (x @ x.T)
    np.fill_diagonal(d2, 0.0)
    return np.maximum(d2, 0.0)
