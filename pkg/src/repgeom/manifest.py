"""Dataset manifests: a declarative file contract for one model's layers.

A manifest is a JSON file listing the layer files in path order, with
exactly one input entry (raw stimuli), at least one hidden entry, and
exactly one target_labels entry (integer class labels, one-hot expanded
downstream).  See docs/file-formats.md for the schema.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .errors import ManifestError
from .npyio import load_matrix
from .path import Dataset

SCHEMA_VERSION = 1
ROLES = ("input", "hidden", "target_labels")


def load_manifest(path, fmt: str = "auto") -> Dataset:
    path = Path(path)
    try:
        spec = json.loads(path.read_text())
    except OSError as exc:
        raise ManifestError(f"cannot read manifest {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ManifestError(f"manifest {path} is not valid JSON: {exc}") from exc
    if spec.get("schema_version") != SCHEMA_VERSION:
        raise ManifestError(
            f"manifest {path}: schema_version must be {SCHEMA_VERSION}, got {spec.get('schema_version')!r}"
        )
    entries = spec.get("layers")
    if not isinstance(entries, list) or not entries:
        raise ManifestError(f"manifest {path}: 'layers' must be a non-empty list")
    classes = spec.get("label_classes")
    if not isinstance(classes, int) or classes < 2:
        raise ManifestError(f"manifest {path}: 'label_classes' must be an integer >= 2")

    inputs, hidden, targets = [], [], []
    for entry in entries:
        role = entry.get("role")
        if role not in ROLES:
            raise ManifestError(f"manifest {path}: unknown role {role!r}")
        name = entry.get("name")
        file_path = entry.get("path")
        if not name or not file_path:
            raise ManifestError(f"manifest {path}: every layer needs 'name' and 'path'")
        resolved = (path.parent / file_path).resolve()
        if not resolved.exists():
            raise ManifestError(f"manifest {path}: file not found: {resolved}")
        record = (name, resolved)
        {"input": inputs, "hidden": hidden, "target_labels": targets}[role].append(record)
    if len(inputs) != 1:
        raise ManifestError(f"manifest {path}: exactly one input entry required, got {len(inputs)}")
    if len(targets) != 1:
        raise ManifestError(
            f"manifest {path}: exactly one target_labels entry required, got {len(targets)}"
        )
    if not hidden:
        raise ManifestError(f"manifest {path}: at least one hidden entry required")

    input_loaded = load_matrix(inputs[0][1], fmt)
    if input_loaded.integer:
        raise ManifestError(f"manifest {path}: integer files are only valid for target_labels")
    layer_matrices, layer_names = [], []
    for name, file_path in hidden:
        loaded = load_matrix(file_path, fmt)
        if loaded.integer:
            raise ManifestError(f"manifest {path}: integer files are only valid for target_labels")
        layer_matrices.append(loaded.data)
        layer_names.append(name)
    label_loaded = load_matrix(targets[0][1], fmt, integer_labels=True)
    if not label_loaded.integer:
        raise ManifestError(f"manifest {path}: target_labels must store integers")
    labels = label_loaded.data
    if labels.shape[1] != 1:
        raise ManifestError(f"manifest {path}: target_labels must be a single column")
    labels = labels.reshape(-1).astype(int)

    rows = {input_loaded.data.shape[0], labels.shape[0], *(x.shape[0] for x in layer_matrices)}
    if len(rows) != 1:
        raise ManifestError(f"manifest {path}: files disagree on row count: {sorted(rows)}")
    row_count = rows.pop()
    declared = spec.get("stimulus_count")
    if declared is not None and declared != row_count:
        raise ManifestError(
            f"manifest {path}: stimulus_count={declared} but files have {row_count} rows"
        )
    if labels.size and (labels.min() < 0 or labels.max() >= classes):
        raise ManifestError(f"manifest {path}: labels must lie in [0, {classes})")

    return Dataset(
        name=spec.get("name", path.stem),
        input_matrix=input_loaded.data,
        layer_matrices=layer_matrices,
        layer_names=layer_names,
        labels=np.asarray(labels),
        classes=classes,
    )
