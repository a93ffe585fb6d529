"""Rank-score characteristic (RSC) curves and cognitive diversity.

An RSC curve lists a model's normalized scores for one sample in rank order,
so ``curve[i - 1]`` is the score found at rank ``i``. Two models with the same
curve shape score alike regardless of which classes they favour; the RMS gap
between curves (cognitive diversity, CD) measures how differently they score.
"""

from __future__ import annotations

from typing import Sequence

import numpy as np

from .errors import InvalidInput
from .matrix import normalize_row_scores, rank_to_score


def _sort_desc(arr: np.ndarray) -> np.ndarray:
    return -np.sort(-arr, axis=-1)


def rsc_of_score_row(row) -> np.ndarray:
    """RSC curve of a score row (or of every row of a 2-D array)."""
    arr = np.asarray(row, dtype=np.float64)
    if arr.shape[-1] < 2:
        raise InvalidInput("an RSC curve needs at least two classes")
    return _sort_desc(normalize_row_scores(arr))


def rsc_of_rank_row(row_ranks) -> np.ndarray:
    """RSC curve of a rank row, with ranks mapped into score space first."""
    arr = np.asarray(row_ranks, dtype=np.float64)
    return _sort_desc(rank_to_score(arr, arr.shape[-1]))


def cognitive_diversity(f_a, f_b) -> float:
    """RMS distance between two RSC curves of equal length."""
    a = np.asarray(f_a, dtype=np.float64)
    b = np.asarray(f_b, dtype=np.float64)
    if a.shape != b.shape:
        raise InvalidInput(f"RSC curves differ in length: {a.shape} vs {b.shape}")
    return float(np.sqrt(np.mean((a - b) ** 2)))


def cd_matrices(curves: np.ndarray) -> np.ndarray:
    """Per-sample pairwise CD matrices.

    Parameters
    ----------
    curves : array of shape (t, n_samples, n)
        RSC curves of ``t`` models for every sample.

    Returns
    -------
    cd : array of shape (n_samples, t, t)
        Symmetric with a zero diagonal.
    """
    c = np.asarray(curves, dtype=np.float64)
    if c.ndim != 3:
        raise InvalidInput(f"expected curves of shape (t, n_samples, n), got {c.shape}")
    per_sample = np.transpose(c, (1, 0, 2))
    diff = per_sample[:, :, None, :] - per_sample[:, None, :, :]
    return np.sqrt(np.mean(diff * diff, axis=-1))


def diversity_strength(cd, j: int | None = None):
    """Mean CD of model ``j`` against every other model.

    ``cd`` is a ``t x t`` matrix, or a stack of them with shape
    ``(n_samples, t, t)``. With ``j=None`` the strengths of all models are
    returned along the last axis.
    """
    m = np.asarray(cd, dtype=np.float64)
    t = m.shape[-1]
    if t < 2:
        raise InvalidInput("diversity strength needs at least two models")
    # The diagonal is zero, so a plain row sum is the sum over the others.
    ds = m.sum(axis=-1) / (t - 1)
    if j is None:
        return ds
    out = ds[..., j]
    return float(out) if np.ndim(out) == 0 else out


def diversity_strengths(curves: np.ndarray) -> np.ndarray:
    """DS of every model on every sample, shape ``(t, n_samples)``."""
    return diversity_strength(cd_matrices(curves)).T


def average_rsc(curves) -> np.ndarray:
    """Element-wise mean of one model's RSC curves across samples."""
    c = np.asarray(curves, dtype=np.float64)
    if c.ndim == 1:
        c = c[None, :]
    if c.shape[0] == 0:
        raise InvalidInput("average_rsc needs at least one curve")
    return c.mean(axis=0)


def score_curves(score_values: Sequence[np.ndarray]) -> np.ndarray:
    """Stack the score-based RSC curves of several models: ``(t, n_samples, n)``."""
    return np.stack([rsc_of_score_row(v) for v in score_values])


def rank_curves(rank_values: Sequence[np.ndarray]) -> np.ndarray:
    """Stack the rank-based RSC curves of several models: ``(t, n_samples, n)``."""
    return np.stack([rsc_of_rank_row(v) for v in rank_values])
