"""Uniform geometric operations over all metric families.

Every metric supplies distance, geodesic, log/exp maps, and a tangent
inner product through one dispatch table; the algorithms here (angles,
geodesic projection, step decomposition) are written once against that
contract.  All functions are pure and safe for concurrent use.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import air, cka, shape
from .errors import (
    DegenerateAngle,
    DegenerateGeodesic,
    IncomparablePoints,
    TangentBaseMismatch,
)
from .linalg import frobenius_inner
from .types import (
    AIR,
    ANGULAR_CKA,
    ANGULAR_SHAPE,
    EUCLIDEAN_SHAPE,
    GeodesicProjectionResult,
    ManifoldPoint,
    TangentVector,
    require_comparable,
    require_same_base,
    same_point,
)

DEGENERATE_DISTANCE = 1e-8

PROJECTION_TOL = 1e-6
PROJECTION_MAX_EVALS = 200
_PROJECTION_SCAN = 33


@dataclass(frozen=True)
class _MetricOps:
    distance: Callable
    geodesic: Callable
    log: Callable
    exp: Callable
    inner: Callable  # (base point, direction, direction) -> float


def _frob_inner(_base: ManifoldPoint, w: np.ndarray, v: np.ndarray) -> float:
    return frobenius_inner(w, v)


def _air_inner(base: ManifoldPoint, w: np.ndarray, v: np.ndarray) -> float:
    return air.inner_product(base, TangentVector(base, w), TangentVector(base, v))


_OPS = {
    ANGULAR_CKA: _MetricOps(cka.distance, cka.geodesic, cka.log_map, cka.exp_map, _frob_inner),
    ANGULAR_SHAPE: _MetricOps(shape.distance, shape.geodesic, shape.log_map, shape.exp_map, _frob_inner),
    EUCLIDEAN_SHAPE: _MetricOps(shape.distance, shape.geodesic, shape.log_map, shape.exp_map, _frob_inner),
    AIR: _MetricOps(air.distance, air.geodesic, air.log_map, air.exp_map, _air_inner),
}


def _ops(point: ManifoldPoint) -> _MetricOps:
    try:
        return _OPS[point.metric]
    except KeyError:
        raise IncomparablePoints(f"unknown metric tag {point.metric!r}") from None


def metric_distance(p: ManifoldPoint, q: ManifoldPoint) -> float:
    """Distance between comparable points (radians for angular metrics)."""
    require_comparable(p, q)
    return _ops(p).distance(p, q)


def geodesic_point(p: ManifoldPoint, q: ManifoldPoint, t: float) -> ManifoldPoint:
    """Point a fraction t along the geodesic from p to q.

    t outside [0, 1] extrapolates where the closed form extends.  When p
    and q coincide (distance below the degeneracy threshold) p itself is
    returned.
    """
    require_comparable(p, q)
    if not math.isfinite(t):
        raise ValueError("geodesic parameter t must be finite")
    return _ops(p).geodesic(p, q, t)


def log_map(p: ManifoldPoint, q: ManifoldPoint) -> TangentVector:
    """Tangent vector at p pointing to q, with norm equal to the distance."""
    require_comparable(p, q)
    return _ops(p).log(p, q)


def exp_map(p: ManifoldPoint, w: TangentVector) -> ManifoldPoint:
    """Walk from p along the tangent w; inverse of the log map."""
    if not same_point(w.base, p):
        raise TangentBaseMismatch("tangent vector is not based at the given point")
    return _ops(p).exp(p, w)


def tangent_inner(w: TangentVector, v: TangentVector) -> float:
    """Inner product of two tangents at the same base under the metric."""
    require_same_base(w, v)
    return _ops(w.base).inner(w.base, w.direction, v.direction)


def tangent_norm(w: TangentVector) -> float:
    return math.sqrt(max(tangent_inner(w, w), 0.0))


def angle_at(a: ManifoldPoint, b: ManifoldPoint, c: ManifoldPoint) -> float:
    """Angle of the triangle (a, b, c) at the middle point b, in [0, pi].

    arccos of the normalized inner product of the tangents from b to a
    and from b to c.  For shape metrics the log map returns horizontal
    tangents, so only metric-affecting components enter.
    """
    require_comparable(a, b, c)
    if metric_distance(b, a) <= DEGENERATE_DISTANCE or metric_distance(b, c) <= DEGENERATE_DISTANCE:
        raise DegenerateAngle("angle vertex coincides with an endpoint")
    wa = log_map(b, a)
    wc = log_map(b, c)
    cos_angle = tangent_inner(wa, wc) / (tangent_norm(wa) * tangent_norm(wc))
    # Floating-point inner products can land just outside [-1, 1].
    return float(np.arccos(np.clip(cos_angle, -1.0, 1.0)))


def _golden_section(f: Callable, lo: float, hi: float, tol: float, budget: int):
    """Golden-section search for the minimum of a unimodal f on [lo, hi]."""
    inv_phi = (math.sqrt(5.0) - 1.0) / 2.0
    c = hi - inv_phi * (hi - lo)
    d = lo + inv_phi * (hi - lo)
    fc, fd = f(c), f(d)
    evals = 2
    while hi - lo > tol and evals < budget:
        if fc < fd:
            hi, d, fd = d, c, fc
            c = hi - inv_phi * (hi - lo)
            fc = f(c)
        else:
            lo, c, fc = c, d, fd
            d = lo + inv_phi * (hi - lo)
            fd = f(d)
        evals += 1
    return (c, fc) if fc <= fd else (d, fd)


def _parabolic_refine(f: Callable, t: float, h: float, lo: float, hi: float, best: float):
    """One stage of parabolic interpolation around the current minimum."""
    t0, t2 = max(lo, t - h), min(hi, t + h)
    if t2 - t0 <= 0:
        return t, best
    f0, f2 = f(t0), f(t2)
    denom = (t0 - t) * (f2 - best) - (t2 - t) * (f0 - best)
    if denom == 0.0:
        return t, best
    num = (t0 - t) ** 2 * (f2 - best) - (t2 - t) ** 2 * (f0 - best)
    cand = t - 0.5 * num / denom
    if not (lo <= cand <= hi) or not math.isfinite(cand):
        return t, best
    fc = f(cand)
    return (cand, fc) if fc < best else (t, best)


def project_to_geodesic(
    query: ManifoldPoint, start: ManifoldPoint, end: ManifoldPoint
) -> GeodesicProjectionResult:
    """Closest point to query on the geodesic segment from start to end.

    Minimizes d(query, geodesic(start, end, t)) over t in [0, 1]: a
    coarse scan brackets the minimum, golden-section search narrows it to
    the tolerance, and one parabolic step refines the estimate.
    """
    require_comparable(query, start, end)
    if metric_distance(start, end) <= DEGENERATE_DISTANCE:
        raise DegenerateGeodesic("cannot project onto a degenerate geodesic")

    def objective(t: float) -> float:
        return metric_distance(query, geodesic_point(start, end, t))

    ts = np.linspace(0.0, 1.0, _PROJECTION_SCAN)
    vals = [objective(t) for t in ts]
    i = int(np.argmin(vals))
    lo = ts[max(i - 1, 0)]
    hi = ts[min(i + 1, _PROJECTION_SCAN - 1)]
    budget = PROJECTION_MAX_EVALS - _PROJECTION_SCAN
    t_star, best = _golden_section(objective, float(lo), float(hi), PROJECTION_TOL, budget)
    if vals[i] < best:
        t_star, best = float(ts[i]), vals[i]
    t_star, best = _parabolic_refine(objective, t_star, PROJECTION_TOL, 0.0, 1.0, best)
    projected = geodesic_point(start, end, t_star)
    return GeodesicProjectionResult(t_star=float(t_star), projected_point=projected, residual_distance=best)


def decompose_step(
    from_point: ManifoldPoint, to_point: ManifoldPoint, target: ManifoldPoint
) -> tuple[float, float]:
    """Split the step from_point -> to_point into progress and deviation.

    Progress is the signed component of the step tangent along the unit
    tangent toward the target; deviation is the norm of the orthogonal
    remainder.  progress^2 + deviation^2 equals the squared step norm.
    """
    require_comparable(from_point, to_point, target)
    w = log_map(from_point, to_point)
    toward = log_map(from_point, target)
    norm_toward = tangent_norm(toward)
    if norm_toward <= DEGENERATE_DISTANCE:
        raise DegenerateGeodesic("step decomposition requires a target distinct from the start")
    unit = toward.scaled(1.0 / norm_toward)
    progress = tangent_inner(w, unit)
    residual = TangentVector(from_point, w.direction - progress * unit.direction)
    return progress, tangent_norm(residual)
