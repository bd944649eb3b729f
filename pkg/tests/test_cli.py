import json

import numpy as np
import pytest

from repgeom.cli import main

from conftest import rand


@pytest.fixture(scope="module")
def dataset_dir(tmp_path_factory):
    root = tmp_path_factory.mktemp("cli_data")
    assert main(["make-synthetic", str(root / "data"), "--m", "60", "--layers", "3",
                 "--n-input", "10", "--n-hidden", "12", "--seed", "5"]) == 0
    return root / "data"


def run(args):
    return main([str(a) for a in args])


def test_path_writes_all_artifacts(dataset_dir, tmp_path):
    out = tmp_path / "out"
    assert run(["path", dataset_dir / "manifest.json", "--subsample", "50", "--seed", "3",
                "--out", out]) == 0
    for name in ("report.json", "pairwise.csv", "path_2d.csv", "path.svg", "pairwise.png", "curves.png"):
        assert (out / name).exists(), name
    report = json.loads((out / "report.json").read_text())
    assert report["labels"] == ["input", "layer_01", "layer_02", "layer_03", "target"]
    assert len(report["pairwise"]) == 5
    assert report["metric"]["metric"] == "angular_cka"
    assert not (out / ".repgeom.lock").exists()


def test_path_reports_byte_identical_across_runs(dataset_dir, tmp_path):
    out1, out2 = tmp_path / "r1", tmp_path / "r2"
    for out in (out1, out2):
        assert run(["path", dataset_dir / "manifest.json", "--subsample", "50", "--seed", "9",
                    "--out", out, "--no-figures"]) == 0
    assert (out1 / "report.json").read_bytes() == (out2 / "report.json").read_bytes()
    assert (out1 / "pairwise.csv").read_bytes() == (out2 / "pairwise.csv").read_bytes()
    assert (out1 / "path_2d.csv").read_bytes() == (out2 / "path_2d.csv").read_bytes()


def test_svg_has_fixed_viewbox(dataset_dir, tmp_path):
    out = tmp_path / "mds"
    assert run(["mds", dataset_dir / "manifest.json", "--subsample", "0", "--out", out]) == 0
    svg = (out / "path.svg").read_text()
    assert 'viewBox="0 0 800 600"' in svg
    assert 'version="1.1"' in svg


def test_distances_with_and_without_target(dataset_dir, tmp_path):
    out = tmp_path / "d1"
    assert run(["distances", dataset_dir / "manifest.json", "--subsample", "0",
                "--out", out, "--no-figures"]) == 0
    header = (out / "pairwise.csv").read_text().splitlines()[0]
    assert header.split(",")[1:] == ["input", "layer_01", "layer_02", "layer_03", "target"]
    out2 = tmp_path / "d2"
    assert run(["distances", dataset_dir / "manifest.json", "--subsample", "0",
                "--out", out2, "--no-target", "--no-figures"]) == 0
    header2 = (out2 / "pairwise.csv").read_text().splitlines()[0]
    assert header2.split(",")[1:] == ["input", "layer_01", "layer_02", "layer_03"]


def test_compare_two_manifests(dataset_dir, tmp_path):
    out = tmp_path / "cmp"
    assert run(["compare", dataset_dir / "manifest.json", dataset_dir / "manifest.json",
                "--subsample", "40", "--out", out, "--no-figures"]) == 0
    lines = (out / "compare.csv").read_text().splitlines()
    assert lines[0] == "model,depth_key,quantity,value"
    assert len(lines) > 10


def test_crossval_matches_manual_two_runs(dataset_dir, tmp_path):
    out = tmp_path / "cv"
    assert run(["crossval", dataset_dir / "manifest.json", "--subsample", "40", "--folds", "2",
                "--seed", "4", "--out", out, "--quantities", "dist_to_target"]) == 0
    lines = (out / "crossval.csv").read_text().splitlines()[1:]
    # Manual recomputation through the library with derived fold seeds.
    from repgeom.manifest import load_manifest
    from repgeom.path import MetricConfig, build_path, build_report
    from repgeom.rng import fold_seeds

    ds = load_manifest(dataset_dir / "manifest.json")
    reports = [
        build_report(build_path(ds, MetricConfig(), m_sub=40, seed=s)) for s in fold_seeds(4, 2)
    ]
    stack = np.stack([r.dist_to_target for r in reports])
    for i, line in enumerate(lines):
        fields = line.split(",")
        assert fields[0] == "dist_to_target"
        assert float(fields[3]) == stack.mean(axis=0)[i]
        assert float(fields[4]) == stack.std(axis=0, ddof=1)[i]


def test_progress_deviation_outputs(dataset_dir, tmp_path):
    out = tmp_path / "pd"
    assert run(["progress-deviation", dataset_dir / "manifest.json", "--subsample", "50",
                "--out", out, "--no-figures"]) == 0
    lines = (out / "progress_deviation.csv").read_text().splitlines()
    assert lines[0] == "model,segment_start,segment_end,progress,deviation"
    assert len(lines) == 3  # 3 layers -> 2 segments
    summary = (out / "progress_deviation_summary.csv").read_text().splitlines()
    assert len(summary) == 2


def test_metric_flag_changes_report(dataset_dir, tmp_path):
    out = tmp_path / "shape_run"
    assert run(["path", dataset_dir / "manifest.json", "--subsample", "40", "--metric",
                "angular-shape", "--p", "20", "--out", out, "--no-figures"]) == 0
    report = json.loads((out / "report.json").read_text())
    assert report["metric"]["metric"] == "angular_shape"
    assert report["metric"]["p"] == 20


def test_exit_codes(dataset_dir, tmp_path, capsys):
    # Usage error: unknown flag.
    with pytest.raises(SystemExit) as exc:
        main(["path", str(dataset_dir / "manifest.json"), "--bogus"])
    assert exc.value.code == 2
    # Computation error: subsample larger than the dataset.
    assert run(["path", dataset_dir / "manifest.json", "--subsample", "5000",
                "--out", tmp_path / "x"]) == 1
    # Missing manifest.
    assert run(["path", tmp_path / "nope.json", "--out", tmp_path / "y"]) == 1
    capsys.readouterr()


def test_lock_file_blocks_concurrent_writers(dataset_dir, tmp_path, capsys):
    out = tmp_path / "locked"
    out.mkdir()
    (out / ".repgeom.lock").write_text("")
    assert run(["distances", dataset_dir / "manifest.json", "--subsample", "0",
                "--out", out, "--no-figures"]) == 1
    err = capsys.readouterr().err
    assert "locked" in err
    (out / ".repgeom.lock").unlink()
    assert run(["distances", dataset_dir / "manifest.json", "--subsample", "0",
                "--out", out, "--no-figures"]) == 0


def test_csv_dataset_ingestion(tmp_path):
    # The same pipeline accepts headerless csv files.
    m = 20
    root = tmp_path / "csvdata"
    root.mkdir()
    np.savetxt(root / "input.csv", rand(0, m, 4), delimiter=",")
    np.savetxt(root / "h1.csv", rand(1, m, 5), delimiter=",")
    labels = (np.arange(m) % 3).astype(int)
    (root / "labels.csv").write_text("\n".join(str(v) for v in labels) + "\n")
    manifest = {
        "schema_version": 1,
        "name": "csvtoy",
        "stimulus_count": m,
        "label_classes": 3,
        "layers": [
            {"name": "pixels", "path": "input.csv", "role": "input"},
            {"name": "h1", "path": "h1.csv", "role": "hidden"},
            {"name": "labels", "path": "labels.csv", "role": "target_labels"},
        ],
    }
    (root / "manifest.json").write_text(json.dumps(manifest))
    out = tmp_path / "csvout"
    assert run(["distances", root / "manifest.json", "--subsample", "0",
                "--out", out, "--no-figures"]) == 0
    assert (out / "pairwise.csv").exists()
