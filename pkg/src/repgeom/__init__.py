"""Metric geometry of neural representations.

Distances, geodesics, log/exp maps, angles, and projections under
several representational metrics, plus analysis of layer sequences as
paths through representation space.
"""

from . import air, cka, shape
from .embedding import EmbeddingConfig, geodesic_polyline, mds_embed, path_to_plane, pca_project
from .kernels import KernelSpec, gram, linear_kernel, median_length_scale, squared_exponential_kernel
from .manifest import load_manifest
from .manifold import (
    angle_at,
    decompose_step,
    exp_map,
    geodesic_point,
    log_map,
    metric_distance,
    project_to_geodesic,
    tangent_inner,
    tangent_norm,
)
from .path import (
    Dataset,
    GeometryReport,
    MetricConfig,
    PathRecord,
    build_path,
    build_report,
    compare_paths,
    cross_validate,
    internal_angles,
    one_hot,
    pairwise_distances,
    progress_curves,
    progress_deviation,
    subsample_rows,
    target_angles,
)
from .rng import SplitMix64, fold_seeds, subsample_indices
from .types import (
    AirParams,
    CkaParams,
    GeodesicProjectionResult,
    ManifoldPoint,
    ShapeParams,
    TangentVector,
)

__version__ = "0.1.0"

__all__ = [
    "air",
    "cka",
    "shape",
    "AirParams",
    "CkaParams",
    "Dataset",
    "EmbeddingConfig",
    "GeodesicProjectionResult",
    "GeometryReport",
    "KernelSpec",
    "ManifoldPoint",
    "MetricConfig",
    "PathRecord",
    "ShapeParams",
    "SplitMix64",
    "TangentVector",
    "angle_at",
    "build_path",
    "build_report",
    "compare_paths",
    "cross_validate",
    "decompose_step",
    "exp_map",
    "fold_seeds",
    "geodesic_point",
    "geodesic_polyline",
    "gram",
    "internal_angles",
    "linear_kernel",
    "load_manifest",
    "log_map",
    "mds_embed",
    "median_length_scale",
    "metric_distance",
    "one_hot",
    "pairwise_distances",
    "path_to_plane",
    "pca_project",
    "progress_curves",
    "progress_deviation",
    "project_to_geodesic",
    "squared_exponential_kernel",
    "subsample_indices",
    "subsample_rows",
    "tangent_inner",
    "tangent_norm",
    "target_angles",
]
