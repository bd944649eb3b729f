"""Command-line surface.

Subcommands: distances, path, mds, progress-deviation, compare,
crossval, make-synthetic.  Exit codes: 0 success, 1 computation or I/O
error, 2 usage error.
"""

from __future__ import annotations

import argparse
import os
import sys
from contextlib import contextmanager
from pathlib import Path

import numpy as np

from . import figures, report
from .embedding import EmbeddingConfig, path_to_plane
from .errors import RepGeomError
from .kernels import KernelSpec
from .manifest import load_manifest
from .manifold import metric_distance
from .path import (
    MetricConfig,
    build_path,
    build_report,
    compare_paths,
    cross_validate,
    progress_deviation,
)
from .synthetic import make_dataset, write_dataset

class UsageError(Exception):
    """Flag combination the parser accepts but the command cannot honor."""


_METRIC_FLAGS = {
    "angular-cka": "angular_cka",
    "angular-shape": "angular_shape",
    "euclidean-shape": "euclidean_shape",
    "air-gram": "air_gram",
    "air-cov": "air_cov",
}

_KERNEL_FLAGS = {"linear": "linear", "se": "squared_exponential"}


def _add_global_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--metric", choices=sorted(_METRIC_FLAGS), default="angular-cka")
    parser.add_argument("--kernel", choices=sorted(_KERNEL_FLAGS), default=None,
                        help="gram kernel (default: linear for angular-cka, se for air-gram)")
    parser.add_argument("--length-scale", type=float, default=None,
                        help="fixed se length scale (default: median heuristic)")
    parser.add_argument("--p", type=int, default=100, help="embedding dimensionality")
    parser.add_argument("--alpha", type=float, default=0.0, help="partial whitening in [0, 1]")
    parser.add_argument("--epsilon", type=float, default=0.05, help="SPD ridge")
    parser.add_argument("--subsample", type=int, default=1000,
                        help="stimulus subsample size (0 = use every row)")
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--folds", type=int, default=10)
    parser.add_argument("--out", type=Path, default=Path("out"))
    parser.add_argument("--format", choices=("auto", "npy", "csv"), default="auto")
    parser.add_argument("--mds-dim", type=int, default=15)
    parser.add_argument("--final-dim", type=int, default=2)
    parser.add_argument("--geodesic-samples", type=int, default=20)
    parser.add_argument("--figures", action=argparse.BooleanOptionalAction, default=True,
                        help="render matplotlib figures next to the delimited outputs")


def _metric_config(args) -> MetricConfig:
    kernel = None
    if args.kernel is not None or args.length_scale is not None:
        kind = _KERNEL_FLAGS[args.kernel] if args.kernel else "squared_exponential"
        kernel = KernelSpec(kind=kind, length_scale=args.length_scale)
    return MetricConfig(
        metric=_METRIC_FLAGS[args.metric],
        kernel=kernel,
        p=args.p,
        alpha=args.alpha,
        epsilon=args.epsilon,
    )


def _embedding_config(args) -> EmbeddingConfig:
    return EmbeddingConfig(
        mds_dim=args.mds_dim,
        final_dim=args.final_dim,
        seed=args.seed,
        geodesic_samples=args.geodesic_samples,
    )


def _m_sub(args) -> int | None:
    return None if args.subsample == 0 else args.subsample


@contextmanager
def _output_lock(outdir: Path):
    """One writer per output directory, guarded by an exclusive lock file."""
    outdir.mkdir(parents=True, exist_ok=True)
    lock = outdir / ".repgeom.lock"
    try:
        fd = os.open(lock, os.O_CREAT | os.O_EXCL | os.O_WRONLY)
    except FileExistsError:
        raise RepGeomError(
            f"output directory is locked by another run: {lock} (delete it if stale)"
        ) from None
    try:
        yield
    finally:
        os.close(fd)
        lock.unlink(missing_ok=True)


def _load_paths(args, manifest_paths):
    config = _metric_config(args)
    paths = []
    for mp in manifest_paths:
        dataset = load_manifest(mp, fmt=args.format)
        paths.append(build_path(dataset, config, m_sub=_m_sub(args), seed=args.seed))
    return paths


def _cmd_distances(args) -> int:
    path_record = _load_paths(args, [args.manifest])[0]
    points = path_record.all_points
    labels = path_record.labels
    if args.no_target:
        points, labels = points[:-1], labels[:-1]
    n = len(points)
    matrix = np.zeros((n, n))
    for i in range(n):
        for j in range(i + 1, n):
            matrix[i, j] = matrix[j, i] = metric_distance(points[i], points[j])
    with _output_lock(args.out):
        report.write_pairwise_csv(labels, matrix, args.out / "pairwise.csv")
        if args.figures:
            figures.save_pairwise_heatmap(labels, matrix, args.out / "pairwise.png")
    print(f"wrote {args.out / 'pairwise.csv'} ({n}x{n})")
    return 0


def _cmd_path(args) -> int:
    path_record = _load_paths(args, [args.manifest])[0]
    geo_report = build_report(path_record)
    rows, _trace = path_to_plane(path_record, _embedding_config(args))
    with _output_lock(args.out):
        report.write_report_json(geo_report, args.out / "report.json")
        report.write_pairwise_csv(geo_report.labels, geo_report.pairwise, args.out / "pairwise.csv")
        report.write_plane_csv(rows, args.out / "path_2d.csv")
        if args.figures:
            figures.save_path_figure(rows, args.out / "path.svg")
            figures.save_pairwise_heatmap(
                geo_report.labels, geo_report.pairwise, args.out / "pairwise.png"
            )
            figures.save_curve_figures(geo_report, args.out / "curves.png")
    print(f"wrote {args.out / 'report.json'}")
    return 0


def _cmd_mds(args) -> int:
    path_record = _load_paths(args, [args.manifest])[0]
    rows, _trace = path_to_plane(path_record, _embedding_config(args))
    with _output_lock(args.out):
        report.write_plane_csv(rows, args.out / "path_2d.csv")
        figures.save_path_figure(rows, args.out / "path.svg")
    print(f"wrote {args.out / 'path_2d.csv'} and {args.out / 'path.svg'}")
    return 0


def _cmd_progress_deviation(args) -> int:
    paths = _load_paths(args, args.manifests)
    # Segments run between consecutive layer points; label them by layer names.
    per_model = [(p.name, p.layer_names, progress_deviation(p)) for p in paths]
    with _output_lock(args.out):
        report.write_progress_deviation_csv(
            per_model,
            args.out / "progress_deviation.csv",
            args.out / "progress_deviation_summary.csv",
        )
        if args.figures:
            figures.save_progress_deviation_figure(per_model, args.out / "progress_deviation.png")
    print(f"wrote {args.out / 'progress_deviation.csv'}")
    return 0


def _cmd_compare(args) -> int:
    paths = _load_paths(args, args.manifests)
    reports = [build_report(p) for p in paths]
    rows = compare_paths(reports, depth_normalize=args.depth_normalize)
    with _output_lock(args.out):
        report.write_compare_csv(rows, args.out / "compare.csv")
        if args.figures:
            figures.save_compare_figure(rows, args.out / "compare.png")
    print(f"wrote {args.out / 'compare.csv'} ({len(rows)} rows)")
    return 0


def _cmd_crossval(args) -> int:
    if args.folds < 2:
        raise UsageError("--folds must be at least 2")
    dataset = load_manifest(args.manifest, fmt=args.format)
    quantities = tuple(q.strip() for q in args.quantities.split(",") if q.strip())
    stats = cross_validate(
        dataset,
        _metric_config(args),
        quantities=quantities,
        folds=args.folds,
        m_sub=_m_sub(args),
        seed=args.seed,
    )
    labels = ["input", *dataset.layer_names, "target"]
    with _output_lock(args.out):
        report.write_crossval_csv(stats, labels, args.out / "crossval.csv")
    print(f"wrote {args.out / 'crossval.csv'}")
    return 0


def _cmd_make_synthetic(args) -> int:
    dataset = make_dataset(
        m=args.m,
        layers=args.layers,
        classes=args.classes,
        n_input=args.n_input,
        n_hidden=args.n_hidden,
        seed=args.seed,
    )
    manifest_path = write_dataset(dataset, args.outdir)
    print(f"wrote {manifest_path}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="repgeom",
        description="Metric geometry of neural representation paths.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def command(name, fn, help_text):
        p = sub.add_parser(name, help=help_text)
        _add_global_flags(p)
        p.set_defaults(fn=fn)
        return p

    p = command("distances", _cmd_distances, "pairwise distance matrix only")
    p.add_argument("manifest", type=Path)
    p.add_argument("--no-target", action="store_true", help="exclude the target point")

    p = command("path", _cmd_path, "full geometry report for one model")
    p.add_argument("manifest", type=Path)

    p = command("mds", _cmd_mds, "2D embedding and SVG figure")
    p.add_argument("manifest", type=Path)

    p = command("progress-deviation", _cmd_progress_deviation,
                "per-segment progress/deviation and summary")
    p.add_argument("manifests", nargs="+", type=Path)

    p = command("compare", _cmd_compare, "depth-aligned multi-model long table")
    p.add_argument("manifests", nargs="+", type=Path)
    p.add_argument("--depth-normalize", action=argparse.BooleanOptionalAction, default=True)

    p = command("crossval", _cmd_crossval, "fold statistics over resampled subsets")
    p.add_argument("manifest", type=Path)
    p.add_argument(
        "--quantities",
        default="pairwise,dist_from_input,dist_to_target,projected_progress",
        help="comma-separated quantity names",
    )

    p = command("make-synthetic", _cmd_make_synthetic, "generate a synthetic dataset")
    p.add_argument("outdir", type=Path)
    p.add_argument("--m", type=int, default=200)
    p.add_argument("--layers", type=int, default=5)
    p.add_argument("--classes", type=int, default=10)
    p.add_argument("--n-input", type=int, default=24)
    p.add_argument("--n-hidden", type=int, default=32)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except UsageError as exc:
        parser.error(str(exc))  # exits with code 2
        return 2
    except (RepGeomError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
