"""Core container types for points and tangent vectors."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import IncomparablePoints, NonFinite, TangentBaseMismatch
from .kernels import KernelSpec

ANGULAR_CKA = "angular_cka"
ANGULAR_SHAPE = "angular_shape"
EUCLIDEAN_SHAPE = "euclidean_shape"
AIR = "air"

GRAM_EMBEDDING = "gram"
COVARIANCE_EMBEDDING = "covariance"


@dataclass(frozen=True)
class ShapeParams:
    """Pre-shape embedding parameters: target dimensionality and partial whitening."""

    p: int = 100
    alpha: float = 0.0

    def __post_init__(self):
        if self.p < 1:
            raise ValueError("p must be a positive integer")
        if not 0.0 <= self.alpha <= 1.0:
            raise ValueError("alpha must lie in [0, 1]")


@dataclass(frozen=True)
class CkaParams:
    kernel: KernelSpec = KernelSpec()


@dataclass(frozen=True)
class AirParams:
    """SPD embedding: kernel Gram plus ridge, or padded/projected covariance plus ridge."""

    embedding: str = GRAM_EMBEDDING
    kernel: KernelSpec = KernelSpec(kind="squared_exponential")
    epsilon: float = 0.05
    p: int = 100

    def __post_init__(self):
        if self.embedding not in (GRAM_EMBEDDING, COVARIANCE_EMBEDDING):
            raise ValueError(f"unknown embedding {self.embedding!r}")
        if not self.epsilon > 0:
            raise ValueError("epsilon must be positive")
        if self.p < 1:
            raise ValueError("p must be a positive integer")


def _frozen_array(a: np.ndarray) -> np.ndarray:
    out = np.array(a, dtype=float, copy=True)
    out.setflags(write=False)
    return out


@dataclass(frozen=True, eq=False)
class ManifoldPoint:
    """A metric-tagged point on one of the embedded manifolds.

    ``payload`` is an m x m normalized Gram matrix, an m x p pre-shape,
    or a k x k SPD matrix depending on ``metric``.  Points are comparable
    only when metric, payload shape, stimulus count, and embedding
    parameters all match.
    """

    metric: str
    payload: np.ndarray
    m: int
    params: object

    def __post_init__(self):
        object.__setattr__(self, "payload", _frozen_array(self.payload))
        if not np.all(np.isfinite(self.payload)):
            raise NonFinite("manifold point payload contains non-finite entries")

    def comparable_with(self, other: "ManifoldPoint") -> bool:
        return (
            self.metric == other.metric
            and self.payload.shape == other.payload.shape
            and self.m == other.m
            and self.params == other.params
        )

    def with_payload(self, payload: np.ndarray) -> "ManifoldPoint":
        return ManifoldPoint(self.metric, payload, self.m, self.params)


def require_comparable(*points: ManifoldPoint) -> None:
    first = points[0]
    for other in points[1:]:
        if not first.comparable_with(other):
            raise IncomparablePoints(
                f"points are not comparable: ({first.metric}, {first.payload.shape}, "
                f"{first.params}) vs ({other.metric}, {other.payload.shape}, {other.params})"
            )


def same_point(a: ManifoldPoint, b: ManifoldPoint) -> bool:
    return a.comparable_with(b) and np.array_equal(a.payload, b.payload)


@dataclass(frozen=True, eq=False)
class TangentVector:
    """A direction matrix attached to a base point."""

    base: ManifoldPoint
    direction: np.ndarray

    def __post_init__(self):
        direction = np.asarray(self.direction, dtype=float)
        if direction.shape != self.base.payload.shape:
            raise TangentBaseMismatch(
                f"tangent shape {direction.shape} does not match base {self.base.payload.shape}"
            )
        object.__setattr__(self, "direction", _frozen_array(direction))
        if not np.all(np.isfinite(self.direction)):
            raise NonFinite("tangent direction contains non-finite entries")

    def scaled(self, factor: float) -> "TangentVector":
        return TangentVector(self.base, factor * self.direction)


def require_same_base(*tangents: TangentVector) -> None:
    first = tangents[0]
    for other in tangents[1:]:
        if not same_point(first.base, other.base):
            raise TangentBaseMismatch("tangent vectors are based at different points")


@dataclass(frozen=True, eq=False)
class GeodesicProjectionResult:
    """Closest point on a geodesic segment: parameter, point, and residual."""

    t_star: float
    projected_point: ManifoldPoint
    residual_distance: float
