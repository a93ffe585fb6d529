"""Deterministic synthetic ensembles for demos and tests."""

from __future__ import annotations

from pathlib import Path

import numpy as np
from scipy.special import softmax

from .io import write_matrix_csv
from .matrix import ScoreMatrix


def disjoint_error_ensemble(n_samples: int = 300, n_classes: int = 5, error_rate: float = 0.3, seed: int = 0):
    """Three models that each err on their own, non-overlapping block of samples.

    Sample ``i`` is misclassified by model ``i // n_err`` (for the first
    ``3 * n_err`` samples) and correctly classified by the other two. The
    winning score is drawn from ``[0.8, 1.0]`` and every other score from
    ``[0, 0.1]``, so on every sample the true class's mean score over the
    three models beats every other class's mean.

    Returns ``(models, labels)``.
    """
    n_err = int(round(error_rate * n_samples))
    if 3 * n_err > n_samples:
        raise ValueError("error blocks of three models must not overlap")
    if n_classes < 2:
        raise ValueError("need at least two classes")
    rng = np.random.default_rng(seed)
    labels = rng.integers(0, n_classes, n_samples)
    models = []
    for m in range(3):
        values = rng.uniform(0.0, 0.1, (n_samples, n_classes))
        top = labels.copy()
        wrong = np.arange(m * n_err, (m + 1) * n_err)
        shift = rng.integers(1, n_classes, len(wrong))
        top[wrong] = (labels[wrong] + shift) % n_classes
        values[np.arange(n_samples), top] = rng.uniform(0.8, 1.0, n_samples)
        models.append(ScoreMatrix("ABC"[m], values, tuple(f"c{i}" for i in range(n_classes))))
    return models, labels


def benchmark_ensemble(n_samples: int = 1000, n_classes: int = 10, n_models: int = 5, seed: int = 0):
    """Softmax outputs of ``n_models`` noisy classifiers of differing quality.

    Each model sees the true class through its own signal strength and
    temperature, plus independent noise. Returns ``(models, labels)``.
    """
    rng = np.random.default_rng(seed)
    labels = rng.integers(0, n_classes, n_samples)
    onehot = np.eye(n_classes)[labels]
    shared = rng.normal(0.0, 1.0, (n_samples, n_classes))
    names = tuple(f"c{i}" for i in range(n_classes))
    models = []
    for m in range(n_models):
        signal = rng.uniform(2.0, 3.2)
        temperature = rng.uniform(0.5, 2.0)
        logits = signal * onehot + 0.5 * shared + rng.normal(0.0, 1.0, (n_samples, n_classes))
        probs = softmax(logits / temperature, axis=1)
        models.append(ScoreMatrix(chr(ord("A") + m), probs, names))
    return models, labels


def write_dataset(models, labels, out_dir) -> tuple[list[Path], Path]:
    """Write ``<model_id>.csv`` per model plus ``labels.txt`` (class names)."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    paths = []
    for m in models:
        p = out / f"{m.model_id}.csv"
        write_matrix_csv(p, m.values, m.class_names)
        paths.append(p)
    names = models[0].class_names
    label_path = out / "labels.txt"
    label_path.write_text("".join(f"{names[int(y)]}\n" for y in labels), encoding="utf-8")
    return paths, label_path


def write_example_dataset(out_dir, seed: int = 0):
    """The bundled CLI example: 5 models, 1,000 samples, 10 classes."""
    models, labels = benchmark_ensemble(1000, 10, 5, seed)
    return write_dataset(models, labels, out_dir)
