"""Accuracy, majority-vote pseudo-labels, top-k filtering and final selection."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

from .errors import InvalidInput
from .matrix import decode


def accuracy(predictions, truth) -> float:
    """Percentage of predictions equal to the truth, in ``[0, 100]``."""
    p = np.asarray(predictions)
    y = np.asarray(truth)
    if p.shape != y.shape or p.ndim != 1:
        raise InvalidInput(f"prediction/label length mismatch: {p.shape} vs {y.shape}")
    if p.size == 0:
        raise InvalidInput("cannot score an empty prediction vector")
    return 100.0 * int(np.count_nonzero(p == y)) / p.size


def majority_vote(base_predictions: Sequence) -> np.ndarray:
    """Plurality class per sample across models; ties go to the lowest class."""
    if len(base_predictions) == 0:
        raise InvalidInput("majority vote needs at least one model")
    votes = np.stack([np.asarray(p, dtype=np.int64) for p in base_predictions])
    if votes.size and votes.min() < 0:
        raise InvalidInput("class indices must be non-negative")
    n_classes = int(votes.max()) + 1
    counts = np.zeros((votes.shape[1], n_classes), dtype=np.int64)
    for row in votes:
        counts[np.arange(votes.shape[1]), row] += 1
    return np.argmax(counts, axis=1)


@dataclass
class AccuracyReport:
    """Accuracies of base models (by id) and fused models (by key)."""

    base: dict[str, float]
    fused: dict = field(default_factory=dict)
    pseudo: bool = False

    @property
    def best_base(self) -> tuple[str, float]:
        # max() keeps the first of equal values, i.e. input order.
        return max(self.base.items(), key=lambda kv: kv[1])


@dataclass(frozen=True)
class BestModel:
    id: str
    accuracy: float
    kind: str  # "score", "rank" or "base"
    scheme: str | None = None
    members: tuple[str, ...] = ()


@dataclass
class Selection:
    best: BestModel
    matrix: np.ndarray
    predictions: np.ndarray
    key: object = None  # FusionKey when a fused model wins


def _ranked(items, k):
    return sorted(items, key=lambda kv: (-kv[1], kv[0].sort_key))[:k]


def top_k(fused: Mapping, base: Mapping[str, float], k: int) -> list:
    """Fused models strictly better than the best base model, best first.

    Score and rank models are ranked separately, each group cut to ``k``,
    and the survivors merged and cut to ``k`` again. Equal accuracies are
    ordered by subset size, then input position of the members, then kind
    (score first), then scheme.
    """
    if k < 1:
        raise InvalidInput(f"k must be >= 1, got {k}")
    floor = max(base.values()) if base else float("-inf")
    qualifying = [(key, acc) for key, acc in fused.items() if acc > floor]
    groups: dict[str, list] = {}
    for key, acc in qualifying:
        groups.setdefault(key.kind, []).append((key, acc))
    survivors = [item for group in groups.values() for item in _ranked(group, k)]
    return _ranked(survivors, k)


def select_output(top: Sequence, base: Mapping[str, float], base_models: Mapping, fused_models: Mapping | None = None) -> Selection:
    """Pick the head of ``top``; fall back to the best base model if it is empty.

    ``base_models`` maps a model id to its score matrix (array or
    :class:`~cfafuse.matrix.ScoreMatrix`); ``fused_models`` maps fused keys
    to :class:`~cfafuse.fusion.FusionModel`.
    """
    if top:
        key, acc = top[0]
        if fused_models is None or key not in fused_models:
            raise InvalidInput(f"no matrix available for selected model {key}")
        model = fused_models[key]
        matrix = np.asarray(model.matrix)
        best = BestModel(key.id, acc, key.kind, key.scheme.value, key.combination.members)
        return Selection(best, matrix, decode(matrix, key.kind), key)
    if not base:
        raise InvalidInput("no base models to fall back on")
    model_id, acc = max(base.items(), key=lambda kv: kv[1])
    matrix = np.asarray(getattr(base_models[model_id], "values", base_models[model_id]))
    return Selection(BestModel(model_id, acc, "base", None, (model_id,)), matrix, decode(matrix, "score"))
