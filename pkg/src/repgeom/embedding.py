"""Low-dimensional views of a path: metric MDS then PCA.

The distance matrix over path points (plus a sampled reference geodesic
from input to target) is embedded by stress majorization into an
intermediate dimension, then projected to the plane with PCA.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidDistanceMatrix
from .linalg import principal_axes
from .manifold import geodesic_point
from .rng import uniform_matrix
from .types import ManifoldPoint


@dataclass(frozen=True)
class EmbeddingConfig:
    mds_dim: int = 15
    final_dim: int = 2
    max_iterations: int = 300
    convergence_tol: float = 1e-9
    seed: int = 0
    geodesic_samples: int = 20

    def __post_init__(self):
        if self.final_dim > self.mds_dim:
            raise ValueError("final_dim cannot exceed mds_dim")
        if self.mds_dim < 1 or self.final_dim < 1:
            raise ValueError("dimensions must be positive")


def _check_distance_matrix(d: np.ndarray) -> np.ndarray:
    d = np.asarray(d, dtype=float)
    if d.ndim != 2 or d.shape[0] != d.shape[1]:
        raise InvalidDistanceMatrix("distance matrix must be square")
    if not np.all(np.isfinite(d)):
        raise InvalidDistanceMatrix("distance matrix contains non-finite entries")
    if np.any(d < 0):
        raise InvalidDistanceMatrix("distance matrix contains negative entries")
    if np.max(np.abs(d - d.T)) > 1e-9:
        raise InvalidDistanceMatrix("distance matrix is not symmetric")
    if np.max(np.abs(np.diag(d))) > 1e-9:
        raise InvalidDistanceMatrix("distance matrix has a nonzero diagonal")
    return 0.5 * (d + d.T)


def _raw_stress(coords: np.ndarray, delta: np.ndarray) -> float:
    d = np.sqrt(
        np.maximum(
            np.sum(coords**2, axis=1)[:, None]
            + np.sum(coords**2, axis=1)[None, :]
            - 2.0 * coords @ coords.T,
            0.0,
        )
    )
    iu = np.triu_indices(delta.shape[0], k=1)
    return float(np.sum((d[iu] - delta[iu]) ** 2))


def mds_embed(distances: np.ndarray, config: EmbeddingConfig = EmbeddingConfig()):
    """Stress-majorization MDS with a deterministic random start.

    Returns (coordinates, stress trace).  Each majorization update
    cannot increase the raw stress, so the trace is non-increasing;
    iteration stops when the relative stress drop falls below the
    configured tolerance.
    """
    delta = _check_distance_matrix(distances)
    n = delta.shape[0]
    if config.mds_dim > n - 1:
        raise InvalidDistanceMatrix(
            f"mds_dim={config.mds_dim} needs at least {config.mds_dim + 1} points, got {n}"
        )
    coords = uniform_matrix(n, config.mds_dim, config.seed)
    stress = _raw_stress(coords, delta)
    trace = [stress]
    for _ in range(config.max_iterations):
        d = np.sqrt(
            np.maximum(
                np.sum(coords**2, axis=1)[:, None]
                + np.sum(coords**2, axis=1)[None, :]
                - 2.0 * coords @ coords.T,
                0.0,
            )
        )
        with np.errstate(divide="ignore", invalid="ignore"):
            ratio = np.where(d > 0, delta / np.where(d > 0, d, 1.0), 0.0)
        b = -ratio
        np.fill_diagonal(b, 0.0)
        np.fill_diagonal(b, -b.sum(axis=1))
        coords = (b @ coords) / n
        new_stress = _raw_stress(coords, delta)
        trace.append(new_stress)
        if stress - new_stress <= config.convergence_tol * max(stress, 1e-300):
            break
        stress = new_stress
    return coords, trace


def pca_project(points: np.ndarray, final_dim: int = 2):
    """Top principal components with a deterministic sign convention.

    Returns (coordinates, explained variance ratios).  Directions beyond
    the data rank contribute (numerically) zero coordinates.
    """
    x = np.asarray(points, dtype=float)
    centered = x - x.mean(axis=0, keepdims=True)
    cov = (centered.T @ centered) / x.shape[0]
    vals, axes = principal_axes(cov)
    vals = np.maximum(vals, 0.0)
    total = float(vals.sum())
    explained = vals[:final_dim] / total if total > 0 else np.zeros(final_dim)
    coords = centered @ axes[:, :final_dim]
    if coords.shape[1] < final_dim:
        coords = np.concatenate(
            [coords, np.zeros((coords.shape[0], final_dim - coords.shape[1]))], axis=1
        )
        explained = np.concatenate([explained, np.zeros(final_dim - explained.size)])
    return coords, explained


def geodesic_polyline(start: ManifoldPoint, end: ManifoldPoint, samples: int = 20) -> list:
    """Points at t = i/(samples-1) along the geodesic from start to end."""
    if samples < 2:
        raise ValueError("a polyline needs at least two samples")
    return [geodesic_point(start, end, i / (samples - 1)) for i in range(samples)]


@dataclass(frozen=True)
class PlanePoint:
    label: str
    x: float
    y: float
    kind: str  # input | layer | target | geodesic


def path_to_plane(path, config: EmbeddingConfig = EmbeddingConfig()) -> tuple[list, list]:
    """Embed a path plus its input-to-target reference geodesic in 2D.

    The geodesic samples join the distance matrix before MDS so the
    reference curve lands in the same plane as the layers.  Returns
    (plane points, stress trace).
    """
    from .manifold import metric_distance

    points = path.all_points
    labels = path.labels
    kinds = ["input"] + ["layer"] * len(path.layer_points) + ["target"]
    geo = geodesic_polyline(path.input_point, path.target_point, config.geodesic_samples)
    for i, g in enumerate(geo):
        points.append(g)
        labels = labels + [f"geodesic_{i:02d}"]
        kinds.append("geodesic")
    n = len(points)
    dist = np.zeros((n, n))
    for i in range(n):
        for j in range(i + 1, n):
            dist[i, j] = dist[j, i] = metric_distance(points[i], points[j])
    mds_dim = min(config.mds_dim, n - 1)
    if mds_dim < config.final_dim:
        raise InvalidDistanceMatrix("too few points for the requested final dimension")
    effective = EmbeddingConfig(
        mds_dim=mds_dim,
        final_dim=config.final_dim,
        max_iterations=config.max_iterations,
        convergence_tol=config.convergence_tol,
        seed=config.seed,
        geodesic_samples=config.geodesic_samples,
    )
    coords, trace = mds_embed(dist, effective)
    plane, _ = pca_project(coords, config.final_dim)
    rows = [
        PlanePoint(label=labels[i], x=float(plane[i, 0]), y=float(plane[i, 1]), kind=kinds[i])
        for i in range(n)
    ]
    return rows, trace
