import math

import numpy as np
import pytest

from repgeom import cka
from repgeom.errors import DegenerateGeodesic, MetricMismatch, ShapeMismatch, TooFewRows
from repgeom.manifold import decompose_step, geodesic_point, metric_distance
from repgeom.path import (
    Dataset,
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
from repgeom.rng import fold_seeds, subsample_indices

from conftest import rand


def sphere_path(seed, n_layers, m=20, n=6, config=None):
    """Path whose layers are embedded random matrices under angular similarity."""
    config = config or MetricConfig()
    inp = cka.embed(rand(seed, m, n))
    layers = [cka.embed(rand(seed + 1 + i, m, n)) for i in range(n_layers)]
    target = cka.embed(rand(seed + 100, m, n))
    return PathRecord("model", config, inp, layers, target, [f"l{i}" for i in range(n_layers)])


def geodesic_walk_path(seed, ts, m=20, n=6):
    """Layers placed at chosen fractions along the input-target geodesic."""
    config = MetricConfig()
    inp = cka.embed(rand(seed, m, n))
    target = cka.embed(rand(seed + 100, m, n))
    layers = [geodesic_point(inp, target, t) for t in ts]
    return PathRecord("walk", config, inp, layers, target, [f"l{i}" for i in range(len(ts))])


def small_dataset(seed=0, m=30, layers=3, classes=5):
    return Dataset(
        name="toy",
        input_matrix=rand(seed, m, 6),
        layer_matrices=[rand(seed + 1 + i, m, 8) for i in range(layers)],
        layer_names=[f"h{i}" for i in range(layers)],
        labels=np.arange(m) % classes,
        classes=classes,
    )


def test_one_hot_expansion():
    out = one_hot(np.array([0, 2, 1]), 3)
    assert np.array_equal(out, np.array([[1, 0, 0], [0, 0, 1], [0, 1, 0]], dtype=float))
    with pytest.raises(ValueError):
        one_hot(np.array([3]), 3)


def test_subsample_rows_identity_and_determinism():
    mats = [rand(0, 10, 3), rand(1, 10, 5)]
    sampled, idx = subsample_rows(mats, 10, 0)
    assert idx == list(range(10))
    assert all(np.array_equal(a, b) for a, b in zip(sampled, mats))
    again, idx2 = subsample_rows(mats, 4, 9)
    again2, idx3 = subsample_rows(mats, 4, 9)
    assert idx2 == idx3
    assert all(np.array_equal(a, b) for a, b in zip(again, again2))
    assert idx2 == subsample_indices(10, 4, 9)


def test_subsample_rows_shared_indices():
    mats = [rand(2, 12, 3), rand(3, 12, 4)]
    sampled, idx = subsample_rows(mats, 5, 1)
    for orig, sub in zip(mats, sampled):
        assert np.array_equal(sub, orig[idx])


def test_subsample_rows_errors():
    with pytest.raises(TooFewRows):
        subsample_rows([rand(0, 4, 2)], 5, 0)
    with pytest.raises(ShapeMismatch):
        subsample_rows([rand(0, 4, 2), rand(1, 5, 2)], 3, 0)


def test_pairwise_matrix_contract():
    path = sphere_path(10, 3)
    mat = pairwise_distances(path)
    assert mat.shape == (5, 5)
    assert np.array_equal(mat, mat.T)
    assert np.all(np.diag(mat) == 0)
    # Spot-check entries against direct calls.
    assert mat[0, 2] == metric_distance(path.input_point, path.layer_points[1])
    assert mat[1, 4] == metric_distance(path.layer_points[0], path.target_point)


def test_progress_curves_layer_at_input():
    config = MetricConfig()
    inp = cka.embed(rand(20, 20, 6))
    target = cka.embed(rand(120, 20, 6))
    path = PathRecord("p", config, inp, [inp], target, ["l0"])
    from_input, to_target, projected = progress_curves(path)
    total = metric_distance(inp, target)
    assert from_input[0] == 0.0
    assert abs(to_target[0] - total) < 1e-12
    assert abs(projected[0]) < 1e-4 * total


def test_progress_curves_on_geodesic_layer():
    path = geodesic_walk_path(21, [0.4])
    total = metric_distance(path.input_point, path.target_point)
    _, _, projected = progress_curves(path)
    assert abs(projected[0] - 0.4 * total) < 1e-4


def test_progress_curves_monotone_on_constructed_walk():
    ts = [0.1, 0.3, 0.5, 0.7, 0.9]
    path = geodesic_walk_path(22, ts)
    total = metric_distance(path.input_point, path.target_point)
    _, _, projected = progress_curves(path)
    assert np.all(np.diff(projected) > 0)
    assert np.allclose(projected / total, ts, atol=1e-3)


def test_progress_curves_degenerate():
    config = MetricConfig()
    inp = cka.embed(rand(23, 15, 4))
    path = PathRecord("p", config, inp, [inp], inp, ["l0"])
    with pytest.raises(DegenerateGeodesic):
        progress_curves(path)


def test_internal_angles_straight_path():
    # Path points are [input, l0, l1, l2]: two interior vertices.
    path = geodesic_walk_path(24, [0.25, 0.5, 0.75])
    angles = internal_angles(path)
    assert len(angles) == 2
    assert all(abs(a - math.pi) < 1e-3 for a in angles)


def test_internal_angles_repeated_layer_gives_missing():
    config = MetricConfig()
    inp = cka.embed(rand(25, 15, 4))
    a = cka.embed(rand(26, 15, 4))
    b = cka.embed(rand(28, 15, 4))
    c = cka.embed(rand(27, 15, 4))
    path = PathRecord("p", config, inp, [a, b, b, c], inp, ["a", "b1", "b2", "c"])
    angles = internal_angles(path)
    assert angles[0] is not None
    assert angles[1] is None and angles[2] is None


def test_target_angle_zero_when_step_points_at_target():
    config = MetricConfig()
    inp = cka.embed(rand(29, 20, 6))
    target = cka.embed(rand(129, 20, 6))
    l1 = cka.embed(rand(30, 20, 6))
    l2 = geodesic_point(l1, target, 0.3)
    path = PathRecord("p", config, inp, [l1, l2], target, ["l1", "l2"])
    angles = target_angles(path)
    assert len(angles) == 2
    assert abs(angles[1]) < 1e-3


def test_target_angle_repeated_point_missing():
    config = MetricConfig()
    inp = cka.embed(rand(31, 15, 4))
    l1 = cka.embed(rand(32, 15, 4))
    target = cka.embed(rand(33, 15, 4))
    path = PathRecord("p", config, inp, [l1, l1], target, ["l1", "l2"])
    angles = target_angles(path)
    assert angles[1] is None


def test_target_angles_match_direct_composition():
    from repgeom.manifold import angle_at

    path = sphere_path(34, 3)
    angles = target_angles(path)
    pts = path.points
    for i, ang in enumerate(angles):
        assert ang == angle_at(pts[i + 1], pts[i], path.target_point)


def test_progress_deviation_identity_and_summary():
    path = sphere_path(35, 4)
    pd = progress_deviation(path)
    assert len(pd.progress) == 3
    for i, (prog, dev) in enumerate(zip(pd.progress, pd.deviation)):
        expected = decompose_step(
            path.layer_points[i], path.layer_points[i + 1], path.target_point
        )
        assert (prog, dev) == expected
    vals = [v for v in pd.progress if v is not None]
    assert abs(pd.progress_mean - np.mean(vals)) < 1e-12
    assert abs(pd.progress_se - np.std(vals, ddof=1) / math.sqrt(len(vals))) < 1e-12


def test_progress_deviation_pure_progress_segments():
    ts = [0.2, 0.5, 0.8]
    path = geodesic_walk_path(36, ts)
    pd = progress_deviation(path)
    assert all(d < 1e-6 for d in pd.deviation)
    assert all(p > 0 for p in pd.progress)


def test_progress_deviation_single_segment_has_no_se():
    path = sphere_path(37, 2)
    pd = progress_deviation(path)
    assert len(pd.progress) == 1
    assert pd.progress_se is None and pd.deviation_se is None
    assert pd.progress_mean is not None


def test_build_report_fields_consistent():
    ds = small_dataset(40)
    report = build_report(build_path(ds, MetricConfig(), m_sub=20, seed=3))
    assert report.pairwise.shape == (5, 5)
    assert len(report.dist_from_input) == 3
    assert len(report.internal_angles) == 2
    assert len(report.target_angles) == 3
    assert len(report.progress) == 2
    assert report.labels == ["input", "h0", "h1", "h2", "target"]
    total = report.pairwise[0, -1]
    assert np.all(report.projected_progress >= 0)
    assert np.all(report.projected_progress <= total)
    assert all(a is None or 0 <= a <= np.pi for a in report.internal_angles)
    assert all(a is None or 0 <= a <= np.pi for a in report.target_angles)
    # Spot-check against direct recomputation.
    path = build_path(ds, MetricConfig(), m_sub=20, seed=3)
    assert np.array_equal(report.pairwise, pairwise_distances(path))


def test_report_deterministic():
    ds = small_dataset(41)
    r1 = build_report(build_path(ds, MetricConfig(), m_sub=25, seed=11))
    r2 = build_report(build_path(ds, MetricConfig(), m_sub=25, seed=11))
    assert np.array_equal(r1.pairwise, r2.pairwise)
    assert np.array_equal(r1.projected_progress, r2.projected_progress)
    assert r1.internal_angles == r2.internal_angles


def test_dist_to_target_decreases_along_final_geodesic():
    ds = small_dataset(42)
    config = MetricConfig()
    path = build_path(ds, config)
    base = path.layer_points[-1]
    dists = []
    for t in (0.0, 0.3, 0.6, 0.9):
        moved = geodesic_point(base, path.target_point, t)
        dists.append(metric_distance(moved, path.target_point))
    assert all(dists[i + 1] < dists[i] for i in range(len(dists) - 1))


def test_cross_validate_two_fold_hand_check():
    ds = small_dataset(43)
    config = MetricConfig()
    stats = cross_validate(ds, config, ("pairwise", "dist_to_target"), folds=2, m_sub=20, seed=7)
    seeds = fold_seeds(7, 2)
    reports = [build_report(build_path(ds, config, m_sub=20, seed=s)) for s in seeds]
    stack = np.stack([r.pairwise for r in reports])
    assert np.allclose(stats["pairwise"]["mean"], stack.mean(axis=0), atol=0)
    assert np.allclose(stats["pairwise"]["stddev"], stack.std(axis=0, ddof=1), atol=0)
    assert np.allclose(stats["pairwise"]["min"], stack.min(axis=0), atol=0)
    assert np.allclose(stats["pairwise"]["max"], stack.max(axis=0), atol=0)
    curve = np.stack([r.dist_to_target for r in reports])
    assert np.allclose(stats["dist_to_target"]["mean"], curve.mean(axis=0), atol=0)


def test_cross_validate_full_subsample_zero_stddev():
    ds = small_dataset(44)
    stats = cross_validate(ds, MetricConfig(), ("pairwise",), folds=3, m_sub=ds.m, seed=1)
    assert np.all(stats["pairwise"]["stddev"] == 0.0)


def test_cross_validate_duplicated_rows_zero_stddev():
    # Every row identical in distribution: one base row repeated, so all
    # folds see literally identical matrices.  The ridge keeps the SPD
    # embedding valid despite duplicate rows.
    m = 20
    ds = Dataset(
        name="dup",
        input_matrix=np.tile(rand(45, 1, 4), (m, 1)),
        layer_matrices=[np.tile(rand(46, 1, 5), (m, 1))],
        layer_names=["h0"],
        labels=np.zeros(m, dtype=int) + 1,
        classes=3,
    )
    stats = cross_validate(ds, MetricConfig(metric="air_gram"), ("pairwise",), folds=3, m_sub=10, seed=2)
    assert np.all(stats["pairwise"]["stddev"] == 0.0)


def test_cross_validate_errors():
    ds = small_dataset(47)
    with pytest.raises(ValueError):
        cross_validate(ds, MetricConfig(), ("pairwise",), folds=1, m_sub=10, seed=0)
    with pytest.raises(TooFewRows):
        cross_validate(ds, MetricConfig(), ("pairwise",), folds=2, m_sub=ds.m + 1, seed=0)
    with pytest.raises(ValueError):
        cross_validate(ds, MetricConfig(), ("bogus",), folds=2, m_sub=10, seed=0)


def test_compare_paths_depth_keys():
    r4 = build_report(build_path(small_dataset(48, layers=4), MetricConfig()))
    r8 = build_report(build_path(small_dataset(49, layers=8), MetricConfig()))
    rows = compare_paths([r4, r8], depth_normalize=True)
    keys4 = sorted({row[1] for row in rows if row[0] == "toy" and row[2] == "dist_from_input"})
    # Both datasets are named "toy"; disambiguate through depth count.
    from repgeom.path import with_name

    rows = compare_paths([with_name(r4, "d4"), with_name(r8, "d8")], depth_normalize=True)
    keys4 = sorted({row[1] for row in rows if row[0] == "d4" and row[2] == "dist_from_input"})
    keys8 = sorted({row[1] for row in rows if row[0] == "d8" and row[2] == "dist_from_input"})
    assert keys4 == [0.25, 0.5, 0.75, 1.0]
    assert keys8 == [i / 8 for i in range(1, 9)]


def test_compare_paths_absolute_depth_and_passthrough():
    report = build_report(build_path(small_dataset(50), MetricConfig()))
    rows = compare_paths([report], depth_normalize=False)
    keys = sorted({row[1] for row in rows if row[2] == "dist_to_target"})
    assert keys == [1.0, 2.0, 3.0]
    rows2 = compare_paths([report], depth_normalize=False)
    assert rows == rows2


def test_compare_paths_same_model_twice_identical():
    report = build_report(build_path(small_dataset(51), MetricConfig()))
    rows = compare_paths([report, report])
    half = len(rows) // 2
    assert [r[1:] for r in rows[:half]] == [r[1:] for r in rows[half:]]


def test_compare_paths_metric_mismatch():
    r1 = build_report(build_path(small_dataset(52), MetricConfig()))
    r2 = build_report(build_path(small_dataset(53), MetricConfig(metric="air_gram")))
    with pytest.raises(MetricMismatch):
        compare_paths([r1, r2])


def test_compare_paths_subsample_mismatch():
    ds = small_dataset(54)
    r1 = build_report(build_path(ds, MetricConfig(), m_sub=20, seed=1))
    r2 = build_report(build_path(ds, MetricConfig(), m_sub=20, seed=2))
    with pytest.raises(MetricMismatch):
        compare_paths([r1, r2])
