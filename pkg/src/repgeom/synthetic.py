"""Deterministic synthetic datasets for demos and end-to-end tests.

Layers interpolate between a random input representation and the one-hot
targets with increasing weight, passed through a tanh, so the resulting
path shows the expected decreasing distance-to-target profile.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .path import Dataset, one_hot
from .rng import fold_seeds, gaussian_matrix, subsample_indices


def make_dataset(
    m: int = 200,
    layers: int = 5,
    classes: int = 10,
    n_input: int = 24,
    n_hidden: int = 32,
    seed: int = 2024,
    name: str = "synthetic",
) -> Dataset:
    seeds = fold_seeds(seed, 2 + 3 * layers)
    x0 = gaussian_matrix(m, n_input, seeds[0])
    perm = subsample_indices(m, m, seeds[1])
    labels = np.array([perm[i] % classes for i in range(m)])
    targets = one_hot(labels, classes)
    layer_matrices, layer_names = [], []
    for layer in range(1, layers + 1):
        a = gaussian_matrix(n_input, n_hidden, seeds[3 * layer - 1]) / np.sqrt(n_input)
        b = gaussian_matrix(classes, n_hidden, seeds[3 * layer])
        noise = gaussian_matrix(m, n_hidden, seeds[3 * layer + 1])
        w = 0.85 * layer / layers
        z = np.tanh((1.0 - w) * (x0 @ a) + w * (targets @ b) + 0.05 * noise)
        layer_matrices.append(z)
        layer_names.append(f"layer_{layer:02d}")
    return Dataset(
        name=name,
        input_matrix=x0,
        layer_matrices=layer_matrices,
        layer_names=layer_names,
        labels=labels,
        classes=classes,
    )


def write_dataset(dataset: Dataset, outdir) -> Path:
    """Write npy files plus a manifest; returns the manifest path."""
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    np.save(outdir / "input.npy", dataset.input_matrix)
    entries = [{"name": "pixels", "path": "input.npy", "role": "input"}]
    for name, matrix in zip(dataset.layer_names, dataset.layer_matrices):
        np.save(outdir / f"{name}.npy", matrix)
        entries.append({"name": name, "path": f"{name}.npy", "role": "hidden"})
    np.save(outdir / "labels.npy", dataset.labels.astype(np.int64))
    entries.append({"name": "labels", "path": "labels.npy", "role": "target_labels"})
    manifest = {
        "schema_version": 1,
        "name": dataset.name,
        "stimulus_count": dataset.m,
        "label_classes": dataset.classes,
        "layers": entries,
    }
    manifest_path = outdir / "manifest.json"
    manifest_path.write_text(json.dumps(manifest, indent=2) + "\n")
    return manifest_path
