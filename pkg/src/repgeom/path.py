"""Layer paths through representation space and their geometry.

A network's selected layer outputs, together with the raw inputs and
one-hot targets, form an ordered sequence of manifold points.  This
module builds that sequence under a chosen metric and computes the path
quantities reported downstream: pairwise distances, progress curves,
internal and target angles, and per-step progress/deviation splits.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from . import air, cka, shape
from .errors import (
    DegenerateAngle,
    DegenerateGeodesic,
    MetricMismatch,
    RepGeomError,
    ShapeMismatch,
    TooFewRows,
)
from .kernels import KernelSpec, linear_kernel, squared_exponential_kernel
from .manifold import metric_distance, angle_at, decompose_step, project_to_geodesic
from .rng import fold_seeds, subsample_indices
from .types import (
    ANGULAR_SHAPE,
    COVARIANCE_EMBEDDING,
    EUCLIDEAN_SHAPE,
    GRAM_EMBEDDING,
    AirParams,
    ManifoldPoint,
    ShapeParams,
)

METRIC_CHOICES = ("angular_cka", "angular_shape", "euclidean_shape", "air_gram", "air_cov")

QUANTITIES = (
    "pairwise",
    "dist_from_input",
    "dist_to_target",
    "projected_progress",
    "internal_angles",
    "target_angles",
    "progress",
    "deviation",
)


@dataclass(frozen=True)
class MetricConfig:
    """Metric choice plus every embedding parameter, with shipped defaults.

    Defaults follow the reference configuration: angular CKA with the
    linear kernel; shape metrics use p=100, alpha=0; the SPD embeddings
    use a squared-exponential kernel with the median length scale and
    ridge epsilon=0.05 (0.1 is also in common use and accepted here).
    """

    metric: str = "angular_cka"
    kernel: KernelSpec | None = None
    p: int = 100
    alpha: float = 0.0
    epsilon: float = 0.05

    def __post_init__(self):
        if self.metric not in METRIC_CHOICES:
            raise ValueError(f"unknown metric {self.metric!r}; choose from {METRIC_CHOICES}")

    def resolved_kernel(self) -> KernelSpec:
        if self.kernel is not None:
            return self.kernel
        if self.metric == "angular_cka":
            return linear_kernel()
        return squared_exponential_kernel()


def embed_matrix(x: np.ndarray, config: MetricConfig) -> ManifoldPoint:
    """Embed one representation matrix under the configured metric."""
    if config.metric == "angular_cka":
        return cka.embed(x, config.resolved_kernel())
    if config.metric == "angular_shape":
        return shape.embed(x, ShapeParams(config.p, config.alpha), ANGULAR_SHAPE)
    if config.metric == "euclidean_shape":
        return shape.embed(x, ShapeParams(config.p, config.alpha), EUCLIDEAN_SHAPE)
    if config.metric == "air_gram":
        params = AirParams(GRAM_EMBEDDING, config.resolved_kernel(), config.epsilon, config.p)
        return air.embed(x, params)
    params = AirParams(COVARIANCE_EMBEDDING, config.resolved_kernel(), config.epsilon, config.p)
    return air.embed(x, params)


def one_hot(labels: np.ndarray, classes: int) -> np.ndarray:
    """Expand integer labels to an m x classes one-hot matrix."""
    labels = np.asarray(labels).reshape(-1).astype(int)
    if labels.size and (labels.min() < 0 or labels.max() >= classes):
        raise ValueError(f"labels must lie in [0, {classes})")
    out = np.zeros((labels.size, classes))
    out[np.arange(labels.size), labels] = 1.0
    return out


@dataclass(frozen=True)
class Dataset:
    """Raw materials for one model's path: inputs, layer outputs, labels."""

    name: str
    input_matrix: np.ndarray
    layer_matrices: list
    layer_names: list
    labels: np.ndarray
    classes: int

    @property
    def m(self) -> int:
        return self.input_matrix.shape[0]


def subsample_rows(matrices: list, m_sub: int, seed: int) -> tuple[list, list[int]]:
    """Apply one deterministic row subsample to every matrix.

    Selecting every row (m_sub equal to the row count) is the identity
    trace; smaller selections follow the pinned generator (docs/rng.md).
    """
    rows = {int(np.asarray(x).shape[0]) for x in matrices}
    if len(rows) != 1:
        raise ShapeMismatch(f"matrices disagree on row count: {sorted(rows)}")
    m = rows.pop()
    if m < m_sub:
        raise TooFewRows(f"cannot draw {m_sub} rows from {m}")
    idx = list(range(m)) if m_sub == m else subsample_indices(m, m_sub, seed)
    return [np.asarray(x)[idx] for x in matrices], idx


@dataclass(frozen=True)
class PathRecord:
    """Embedded path: input point, ordered layer points, target point."""

    name: str
    config: MetricConfig
    input_point: ManifoldPoint
    layer_points: list
    target_point: ManifoldPoint
    layer_names: list
    subsample: list | None = None
    seed: int | None = None

    def __post_init__(self):
        if not self.layer_points:
            raise ValueError("a path needs at least one layer point")

    @property
    def points(self) -> list:
        """Traversal order: input, then layers.  Target is kept separate."""
        return [self.input_point, *self.layer_points]

    @property
    def labels(self) -> list:
        return ["input", *self.layer_names, "target"]

    @property
    def all_points(self) -> list:
        return [self.input_point, *self.layer_points, self.target_point]


def build_path(
    dataset: Dataset,
    config: MetricConfig = MetricConfig(),
    m_sub: int | None = None,
    seed: int = 0,
) -> PathRecord:
    """Subsample (optionally), one-hot-expand targets, and embed everything."""
    matrices = [dataset.input_matrix, *dataset.layer_matrices]
    if m_sub is not None and m_sub != dataset.m:
        matrices_plus = matrices + [np.asarray(dataset.labels).reshape(-1, 1)]
        sampled, idx = subsample_rows(matrices_plus, m_sub, seed)
        matrices = sampled[:-1]
        labels = sampled[-1].reshape(-1)
    else:
        idx = list(range(dataset.m))
        labels = np.asarray(dataset.labels).reshape(-1)
    target = one_hot(labels, dataset.classes)
    return PathRecord(
        name=dataset.name,
        config=config,
        input_point=embed_matrix(matrices[0], config),
        layer_points=[embed_matrix(x, config) for x in matrices[1:]],
        target_point=embed_matrix(target, config),
        layer_names=list(dataset.layer_names),
        subsample=list(idx),
        seed=seed,
    )


def pairwise_distances(path: PathRecord) -> np.ndarray:
    """Symmetric zero-diagonal distance matrix over input, layers, target."""
    pts = path.all_points
    names = path.labels
    n = len(pts)
    out = np.zeros((n, n))
    for i in range(n):
        for j in range(i + 1, n):
            try:
                out[i, j] = out[j, i] = metric_distance(pts[i], pts[j])
            except RepGeomError as exc:
                raise type(exc)(f"pairwise distance ({names[i]}, {names[j]}): {exc}") from exc
    return out


def progress_curves(path: PathRecord) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Per-layer distance from input, distance to target, projected progress.

    Projected progress for layer l is t* . d(input, target) where t* is
    the projection parameter of the layer onto the input-to-target
    geodesic segment.
    """
    total = metric_distance(path.input_point, path.target_point)
    if total <= 1e-8:
        raise DegenerateGeodesic("input and target coincide; progress is undefined")
    from_input = np.array([metric_distance(path.input_point, p) for p in path.layer_points])
    to_target = np.array([metric_distance(p, path.target_point) for p in path.layer_points])
    projected = np.array(
        [
            project_to_geodesic(p, path.input_point, path.target_point).t_star * total
            for p in path.layer_points
        ]
    )
    return from_input, to_target, projected


def internal_angles(path: PathRecord) -> list:
    """Angle between adjacent path segments at each interior point.

    The traversed sequence starts at the input point.  Degenerate
    vertices (repeated layers) yield None rather than failing, so the
    per-layer alignment across models is preserved.
    """
    pts = path.points
    if len(pts) < 3:
        raise ValueError("internal angles need at least three path points")
    out = []
    for i in range(1, len(pts) - 1):
        try:
            out.append(angle_at(pts[i - 1], pts[i], pts[i + 1]))
        except DegenerateAngle:
            out.append(None)
    return out


def target_angles(path: PathRecord) -> list:
    """Angle between each segment and the geodesic from its start to the target."""
    pts = path.points
    if len(pts) < 2:
        raise ValueError("target angles need at least two path points")
    out = []
    for i in range(len(pts) - 1):
        try:
            out.append(angle_at(pts[i + 1], pts[i], path.target_point))
        except DegenerateAngle:
            out.append(None)
    return out


@dataclass(frozen=True)
class ProgressDeviation:
    """Per-segment progress/deviation plus their mean and standard error."""

    progress: list
    deviation: list
    progress_mean: float | None
    progress_se: float | None
    deviation_mean: float | None
    deviation_se: float | None


def _mean_se(values: list) -> tuple[float | None, float | None]:
    vals = [v for v in values if v is not None]
    if not vals:
        return None, None
    mean = float(np.mean(vals))
    if len(vals) < 2:
        return mean, None
    se = float(np.std(vals, ddof=1) / math.sqrt(len(vals)))
    return mean, se


def progress_deviation(path: PathRecord) -> ProgressDeviation:
    """Decompose each layer-to-layer step against its start-to-target geodesic.

    A path with D layer points yields D-1 (progress, deviation) pairs.
    Degenerate segments (start at the target) are reported as None.
    """
    pts = path.layer_points
    if len(pts) < 2:
        raise ValueError("progress/deviation needs at least two layer points")
    progress, deviation = [], []
    for i in range(len(pts) - 1):
        try:
            prog, dev = decompose_step(pts[i], pts[i + 1], path.target_point)
            progress.append(prog)
            deviation.append(dev)
        except DegenerateGeodesic:
            progress.append(None)
            deviation.append(None)
    p_mean, p_se = _mean_se(progress)
    d_mean, d_se = _mean_se(deviation)
    return ProgressDeviation(progress, deviation, p_mean, p_se, d_mean, d_se)


@dataclass(frozen=True)
class GeometryReport:
    """Everything computed for one path, aligned to the layer labels."""

    name: str
    config: MetricConfig
    labels: list
    m: int
    seed: int | None
    subsample: list | None
    pairwise: np.ndarray
    dist_from_input: np.ndarray
    dist_to_target: np.ndarray
    projected_progress: np.ndarray
    internal_angles: list
    target_angles: list
    progress: list = field(default_factory=list)
    deviation: list = field(default_factory=list)
    progress_mean: float | None = None
    progress_se: float | None = None
    deviation_mean: float | None = None
    deviation_se: float | None = None

    @property
    def depth(self) -> int:
        return len(self.labels) - 2


def _named(label, fn, *args):
    try:
        return fn(*args)
    except RepGeomError as exc:
        raise type(exc)(f"{label}: {exc}") from exc


def build_report(path: PathRecord) -> GeometryReport:
    """Compute the full set of path quantities for one model."""
    from_input, to_target, projected = _named("progress curves", progress_curves, path)
    angles_internal = _named("internal angles", internal_angles, path) if len(path.points) >= 3 else []
    angles_target = _named("target angles", target_angles, path)
    if len(path.layer_points) >= 2:
        pd = _named("progress/deviation", progress_deviation, path)
    else:
        pd = ProgressDeviation([], [], None, None, None, None)
    return GeometryReport(
        name=path.name,
        config=path.config,
        labels=path.labels,
        m=path.input_point.m,
        seed=path.seed,
        subsample=path.subsample,
        pairwise=pairwise_distances(path),
        dist_from_input=from_input,
        dist_to_target=to_target,
        projected_progress=projected,
        internal_angles=angles_internal,
        target_angles=angles_target,
        progress=pd.progress,
        deviation=pd.deviation,
        progress_mean=pd.progress_mean,
        progress_se=pd.progress_se,
        deviation_mean=pd.deviation_mean,
        deviation_se=pd.deviation_se,
    )


def compute_quantities(path: PathRecord, quantities: tuple) -> dict:
    """Compute only the requested quantities for one path."""
    out: dict = {}
    wanted = set(quantities)
    unknown = wanted - set(QUANTITIES)
    if unknown:
        raise ValueError(f"unknown quantities {sorted(unknown)}; choose from {QUANTITIES}")
    if "pairwise" in wanted:
        out["pairwise"] = pairwise_distances(path)
    if wanted & {"dist_from_input", "dist_to_target", "projected_progress"}:
        from_input, to_target, projected = progress_curves(path)
        out.update(
            {
                k: v
                for k, v in (
                    ("dist_from_input", from_input),
                    ("dist_to_target", to_target),
                    ("projected_progress", projected),
                )
                if k in wanted
            }
        )
    if "internal_angles" in wanted:
        out["internal_angles"] = internal_angles(path)
    if "target_angles" in wanted:
        out["target_angles"] = target_angles(path)
    if wanted & {"progress", "deviation"}:
        pd = progress_deviation(path)
        if "progress" in wanted:
            out["progress"] = pd.progress
        if "deviation" in wanted:
            out["deviation"] = pd.deviation
    return out


def cross_validate(
    dataset: Dataset,
    config: MetricConfig,
    quantities: tuple = ("pairwise",),
    folds: int = 10,
    m_sub: int | None = None,
    seed: int = 0,
) -> dict:
    """Elementwise fold statistics over independently resampled subsets.

    Each fold subsamples m_sub rows with its own seed derived from the
    base seed, recomputes the requested quantities, and the results are
    reduced elementwise to mean, stddev (sample, ddof=1), min, and max.
    """
    if folds < 2:
        raise ValueError("cross-validation needs at least two folds")
    for q in quantities:
        if q not in QUANTITIES:
            raise ValueError(f"unknown quantity {q!r}; choose from {QUANTITIES}")
    if m_sub is None:
        m_sub = dataset.m
    if m_sub > dataset.m:
        raise TooFewRows(f"cannot draw {m_sub} rows from {dataset.m}")
    seeds = fold_seeds(seed, folds)
    per_fold = []
    for fold_seed in seeds:
        path = build_path(dataset, config, m_sub=m_sub, seed=fold_seed)
        values = compute_quantities(path, tuple(quantities))
        per_fold.append({q: np.asarray(values[q], dtype=float) for q in quantities})
    out = {}
    for q in quantities:
        stack = np.stack([fold[q] for fold in per_fold])
        out[q] = {
            "mean": stack.mean(axis=0),
            "stddev": stack.std(axis=0, ddof=1),
            "min": stack.min(axis=0),
            "max": stack.max(axis=0),
        }
    return out


def compare_paths(reports: list, depth_normalize: bool = True) -> list:
    """Align per-layer quantities across models as long-format rows.

    Rows are (model, depth_key, quantity, value); with depth
    normalization the key for layer l of an L-layer model is l / L, so
    models of different depths share the [0, 1] axis.
    """
    if not reports:
        return []
    first = reports[0]
    for other in reports[1:]:
        if other.config != first.config:
            raise MetricMismatch("reports were produced under different metric configurations")
        if other.subsample != first.subsample:
            raise MetricMismatch("reports were produced from different stimulus subsamples")
    rows = []
    for rep in reports:
        depth = rep.depth

        def key(layer_index: int) -> float:
            return layer_index / depth if depth_normalize else float(layer_index)

        for i in range(depth):
            rows.append((rep.name, key(i + 1), "dist_from_input", float(rep.dist_from_input[i])))
            rows.append((rep.name, key(i + 1), "dist_to_target", float(rep.dist_to_target[i])))
            rows.append(
                (rep.name, key(i + 1), "projected_progress", float(rep.projected_progress[i]))
            )
        for i, val in enumerate(rep.internal_angles):
            rows.append((rep.name, key(i + 1), "internal_angle", _opt(val)))
        for i, val in enumerate(rep.target_angles):
            rows.append((rep.name, key(i), "target_angle", _opt(val)))
        for i, val in enumerate(rep.progress):
            rows.append((rep.name, key(i + 1), "progress", _opt(val)))
        for i, val in enumerate(rep.deviation):
            rows.append((rep.name, key(i + 1), "deviation", _opt(val)))
    return rows


def _opt(v):
    return None if v is None else float(v)


def with_name(report: GeometryReport, name: str) -> GeometryReport:
    return replace(report, name=name)
