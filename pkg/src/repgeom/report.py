"""Deterministic report serialization.

Every float is written with 17 significant digits so values round-trip
exactly; identical inputs produce byte-identical files.  The JSON
emitter is local so the float format and key order are pinned.
"""

from __future__ import annotations

import math
from pathlib import Path

import numpy as np


def format_float(x: float) -> str:
    if isinstance(x, float) and not math.isfinite(x):
        raise ValueError("reports may not contain non-finite numbers")
    return f"{x:.17g}"


def _emit(value, parts: list) -> None:
    if value is None:
        parts.append("null")
    elif isinstance(value, bool):
        parts.append("true" if value else "false")
    elif isinstance(value, (int, np.integer)):
        parts.append(str(int(value)))
    elif isinstance(value, (float, np.floating)):
        parts.append(format_float(float(value)))
    elif isinstance(value, str):
        parts.append('"' + value.replace("\\", "\\\\").replace('"', '\\"') + '"')
    elif isinstance(value, dict):
        parts.append("{")
        for i, (k, v) in enumerate(value.items()):
            if i:
                parts.append(", ")
            _emit(str(k), parts)
            parts.append(": ")
            _emit(v, parts)
        parts.append("}")
    elif isinstance(value, (list, tuple)):
        parts.append("[")
        for i, v in enumerate(value):
            if i:
                parts.append(", ")
            _emit(v, parts)
        parts.append("]")
    elif isinstance(value, np.ndarray):
        _emit(value.tolist(), parts)
    else:
        raise TypeError(f"cannot serialize {type(value).__name__}")


def dumps(value) -> str:
    parts: list = []
    _emit(value, parts)
    return "".join(parts)


def report_to_dict(report) -> dict:
    cfg = report.config
    return {
        "schema_version": 1,
        "model": report.name,
        "metric": {
            "metric": cfg.metric,
            "kernel": cfg.resolved_kernel().kind,
            "length_scale": cfg.resolved_kernel().length_scale,
            "p": cfg.p,
            "alpha": cfg.alpha,
            "epsilon": cfg.epsilon,
        },
        "m": report.m,
        "seed": report.seed,
        "subsample": report.subsample,
        "labels": list(report.labels),
        "pairwise": report.pairwise,
        "dist_from_input": report.dist_from_input,
        "dist_to_target": report.dist_to_target,
        "projected_progress": report.projected_progress,
        "internal_angles": list(report.internal_angles),
        "target_angles": list(report.target_angles),
        "progress": list(report.progress),
        "deviation": list(report.deviation),
        "progress_mean": report.progress_mean,
        "progress_se": report.progress_se,
        "deviation_mean": report.deviation_mean,
        "deviation_se": report.deviation_se,
    }


def write_report_json(report, path) -> None:
    Path(path).write_text(dumps(report_to_dict(report)) + "\n")


def write_pairwise_csv(labels, matrix, path) -> None:
    matrix = np.asarray(matrix)
    lines = ["," + ",".join(labels)]
    for label, row in zip(labels, matrix):
        lines.append(label + "," + ",".join(format_float(v) for v in row))
    Path(path).write_text("\n".join(lines) + "\n")


def write_plane_csv(rows, path) -> None:
    lines = ["point_label,x,y,kind"]
    for r in rows:
        lines.append(f"{r.label},{format_float(r.x)},{format_float(r.y)},{r.kind}")
    Path(path).write_text("\n".join(lines) + "\n")


def write_compare_csv(rows, path) -> None:
    lines = ["model,depth_key,quantity,value"]
    for model, depth, quantity, value in rows:
        val = "" if value is None else format_float(value)
        lines.append(f"{model},{format_float(depth)},{quantity},{val}")
    Path(path).write_text("\n".join(lines) + "\n")


def _stat_cell(value: float) -> str:
    # Fold statistics inherit NaN from degenerate angles; emit an empty
    # field rather than a non-round-trippable token.
    return "" if not math.isfinite(value) else format_float(value)


def write_crossval_csv(stats: dict, labels, path) -> None:
    """Long-format fold statistics; pairwise cells carry two keys."""
    lines = ["quantity,key1,key2,mean,stddev,min,max"]
    for quantity in sorted(stats):
        fields = stats[quantity]
        mean = np.asarray(fields["mean"])
        if mean.ndim == 2:
            for i in range(mean.shape[0]):
                for j in range(mean.shape[1]):
                    lines.append(
                        f"{quantity},{labels[i]},{labels[j]},"
                        + ",".join(
                            _stat_cell(float(np.asarray(fields[k])[i, j]))
                            for k in ("mean", "stddev", "min", "max")
                        )
                    )
        else:
            for i in range(mean.shape[0]):
                lines.append(
                    f"{quantity},{i},,"
                    + ",".join(
                        _stat_cell(float(np.asarray(fields[k])[i]))
                        for k in ("mean", "stddev", "min", "max")
                    )
                )
    Path(path).write_text("\n".join(lines) + "\n")


def write_progress_deviation_csv(per_model: list, path, summary_path) -> None:
    lines = ["model,segment_start,segment_end,progress,deviation"]
    summary = ["model,progress_mean,progress_se,deviation_mean,deviation_se,segments"]
    for name, layer_names, pd in per_model:
        for i, (prog, dev) in enumerate(zip(pd.progress, pd.deviation)):
            p = "" if prog is None else format_float(prog)
            d = "" if dev is None else format_float(dev)
            lines.append(f"{name},{layer_names[i]},{layer_names[i + 1]},{p},{d}")
        vals = [
            "" if v is None else format_float(v)
            for v in (pd.progress_mean, pd.progress_se, pd.deviation_mean, pd.deviation_se)
        ]
        summary.append(f"{name},{','.join(vals)},{len(pd.progress)}")
    Path(path).write_text("\n".join(lines) + "\n")
    Path(summary_path).write_text("\n".join(summary) + "\n")
