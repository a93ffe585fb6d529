"""Score and rank matrices, row-wise ranking, normalization and decoding.

Every sample (row) of a classifier's output is treated as a score function
over the class columns. Ranks are assigned per row in descending score
order, so rank 1 is the class with the highest score.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Literal, Sequence

import numpy as np
from scipy.stats import rankdata

from .errors import InvalidInput

TIE_POLICIES = ("average", "min", "max", "dense", "ordinal")
TiePolicy = Literal["average", "min", "max", "dense", "ordinal"]
Kind = Literal["score", "rank"]


def _as_finite_matrix(values, name: str) -> np.ndarray:
    arr = np.array(values, dtype=np.float64)
    if arr.ndim != 2:
        raise InvalidInput(f"{name}: expected a 2-D matrix, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        bad = np.argwhere(~np.isfinite(arr))[0]
        raise InvalidInput(
            f"{name}: non-finite entry at row {bad[0]}, column {bad[1]}"
        )
    return arr


@dataclass(frozen=True)
class ScoreMatrix:
    """One model's ``n_samples x n_classes`` score (logit or probability) matrix."""

    model_id: str
    values: np.ndarray
    class_names: tuple[str, ...] = field(default=())

    def __post_init__(self):
        arr = _as_finite_matrix(self.values, self.model_id)
        n_samples, n_classes = arr.shape
        if n_samples < 1:
            raise InvalidInput(f"{self.model_id}: needs at least one sample")
        if n_classes < 2:
            raise InvalidInput(f"{self.model_id}: needs at least two classes")
        names = tuple(self.class_names) or tuple(str(i) for i in range(n_classes))
        if len(names) != n_classes:
            raise InvalidInput(
                f"{self.model_id}: {len(names)} class names for {n_classes} columns"
            )
        arr.setflags(write=False)
        object.__setattr__(self, "values", arr)
        object.__setattr__(self, "class_names", names)

    @property
    def shape(self) -> tuple[int, int]:
        return self.values.shape

    @property
    def n_samples(self) -> int:
        return self.values.shape[0]

    @property
    def n_classes(self) -> int:
        return self.values.shape[1]


@dataclass(frozen=True)
class RankMatrix:
    """Row-wise ranks of a :class:`ScoreMatrix`; rank 1 is the top score."""

    model_id: str
    values: np.ndarray
    policy: TiePolicy = "average"


def check_aligned(scores: Sequence[ScoreMatrix]) -> None:
    """Raise :class:`InvalidInput` unless all matrices share shape and class order."""
    if not scores:
        raise InvalidInput("no score matrices given")
    first = scores[0]
    for s in scores[1:]:
        if s.shape != first.shape:
            raise InvalidInput(
                f"shape mismatch: {first.model_id} is {first.shape}, "
                f"{s.model_id} is {s.shape}"
            )
        if s.class_names != first.class_names:
            raise InvalidInput(
                f"class columns of {s.model_id} differ from {first.model_id}"
            )


def rank_values(values: np.ndarray, policy: TiePolicy = "average") -> np.ndarray:
    """Rank each row of a raw array in descending order.

    ``ordinal`` breaks ties by ascending column index.
    """
    if policy not in TIE_POLICIES:
        raise InvalidInput(f"unknown tie policy {policy!r}; expected one of {TIE_POLICIES}")
    arr = np.asarray(values, dtype=np.float64)
    if not np.all(np.isfinite(arr)):
        raise InvalidInput("cannot rank non-finite scores")
    return rankdata(-arr, method=policy, axis=-1).astype(np.float64)


def rank_rows(scores: ScoreMatrix, policy: TiePolicy = "average") -> RankMatrix:
    """Derive the rank matrix of a score matrix, one row at a time."""
    return RankMatrix(scores.model_id, rank_values(scores.values, policy), policy)


def normalize_row_scores(row) -> np.ndarray:
    """Min-max normalize to ``[0, 1]``.

    Works on a single row or on every row of a 2-D array. Constant rows map to
    all zeros.
    """
    arr = np.asarray(row, dtype=np.float64)
    lo = arr.min(axis=-1, keepdims=True)
    span = arr.max(axis=-1, keepdims=True) - lo
    safe = np.where(span > 0, span, 1.0)
    return np.where(span > 0, (arr - lo) / safe, 0.0)


def rank_to_score(row_ranks, n: int) -> np.ndarray:
    """Map ranks in ``[1, n]`` linearly onto scores: rank 1 -> 1.0, rank n -> 0.0."""
    if n < 2:
        raise InvalidInput(f"rank_to_score needs n >= 2, got {n}")
    r = np.asarray(row_ranks, dtype=np.float64)
    return (n - r) / (n - 1)


def decode(matrix, kind: Kind = "score") -> np.ndarray:
    """One-hot decode a score (argmax) or rank (argmin) matrix into class indices.

    Ties go to the lowest class index.
    """
    arr = np.asarray(matrix, dtype=np.float64)
    if arr.ndim == 1:
        arr = arr[None, :]
    if kind == "score":
        return np.argmax(arr, axis=1)
    if kind == "rank":
        return np.argmin(arr, axis=1)
    raise InvalidInput(f"kind must be 'score' or 'rank', got {kind!r}")


def check_labels(labels, n_samples: int, n_classes: int) -> np.ndarray:
    """Validate a label vector and return it as an int array."""
    y = np.asarray(labels)
    if y.ndim != 1 or len(y) != n_samples:
        raise InvalidInput(f"expected {n_samples} labels, got shape {y.shape}")
    if y.size and not np.issubdtype(y.dtype, np.integer):
        if not np.all(np.equal(np.mod(y, 1), 0)):
            raise InvalidInput("labels must be integer class indices")
    y = y.astype(np.int64)
    if y.size and (y.min() < 0 or y.max() >= n_classes):
        raise InvalidInput(f"labels must lie in [0, {n_classes})")
    return y
