"""One full fusion pass: ranks, batched weights and fusion, evaluation, selection."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Literal, Mapping, Sequence

import numpy as np

from .errors import InternalError, InvalidInput, MissingLabels
from .fusion import (
    KINDS,
    Combination,
    FusionKey,
    FusionModel,
    Scheme,
    WeightTable,
    compute_weights,
    enumerate_combinations,
    parse_schemes,
    performance_weights,
    run_cfa,
)
from .matrix import TIE_POLICIES, ScoreMatrix, TiePolicy, check_aligned, check_labels, decode, rank_rows
from .rsc import average_rsc, rsc_of_score_row
from .selection import AccuracyReport, BestModel, accuracy, majority_vote, select_output, top_k

log = logging.getLogger(__name__)


@dataclass
class LayerConfig:
    """Inputs and knobs of one fusion pass.

    ``models`` maps a model id to its scores, or is a sequence of
    :class:`ScoreMatrix`. Without ``labels`` the pass must run with
    ``mode="unsupervised"``, in which case the base models' majority vote is
    used wherever ground truth would be. ``rank_ds_source`` picks which RSC
    curves drive WCDS weights for rank fusion.
    """

    models: Mapping[str, ScoreMatrix] | Sequence[ScoreMatrix]
    labels: Sequence[int] | np.ndarray | None = None
    schemes: Sequence[Scheme | str] | str = ("AC", "WCDS", "WCP")
    batch_size: int = 1024
    tie_policy: TiePolicy = "average"
    output_dir: str | Path | None = None
    k: int | None = None
    mode: Literal["supervised", "unsupervised"] = "supervised"
    rank_ds_source: Literal["rank", "score"] = "rank"
    svg: bool = False


@dataclass
class TrendRow:
    combination: Combination
    score_accuracy: float
    rank_accuracy: float


@dataclass
class LayerResult:
    best: BestModel
    top_k: list
    accuracy_report: AccuracyReport
    matrix: np.ndarray
    predictions: np.ndarray
    trends: dict[Scheme, list[TrendRow]]
    rsc_curves: dict[str, np.ndarray]
    fused: dict[FusionKey, FusionModel] = field(repr=False, default_factory=dict)
    labels: np.ndarray | None = field(repr=False, default=None)
    config: LayerConfig | None = field(repr=False, default=None)
    schemes: list[Scheme] = field(default_factory=list)
    model_ids: list[str] = field(default_factory=list)
    class_names: tuple[str, ...] = ()

    @property
    def pseudo(self) -> bool:
        return self.accuracy_report.pseudo


def split_batches(n_samples: int, batch_size: int) -> list[range]:
    """Contiguous row ranges of at most ``batch_size`` rows covering ``[0, n_samples)``."""
    if batch_size < 1:
        raise InvalidInput(f"batch_size must be >= 1, got {batch_size}")
    if n_samples < 0:
        raise InvalidInput(f"n_samples must be >= 0, got {n_samples}")
    return [range(lo, min(lo + batch_size, n_samples)) for lo in range(0, n_samples, batch_size)]


def merge_batches(parts: Sequence[tuple[range, np.ndarray]], n_samples: int | None = None) -> np.ndarray:
    """Concatenate per-batch matrices after checking the ranges tile the rows."""
    if not parts:
        raise InternalError("no batches to merge")
    expected = 0
    width = None
    for rows, block in parts:
        if rows.start != expected:
            kind = "gap" if rows.start > expected else "overlap"
            raise InternalError(f"batch {kind} at row {expected} (next batch starts at {rows.start})")
        if block.shape[0] != len(rows):
            raise InternalError(f"batch {rows} holds {block.shape[0]} rows")
        if width is None:
            width = block.shape[1:]
        elif block.shape[1:] != width:
            raise InternalError("batches disagree in width")
        expected = rows.stop
    if n_samples is not None and expected != n_samples:
        raise InternalError(f"batches cover {expected} of {n_samples} rows")
    return np.concatenate([block for _, block in parts], axis=0)


def _normalize_models(models) -> list[ScoreMatrix]:
    if isinstance(models, Mapping):
        out = []
        for mid, m in models.items():
            if isinstance(m, ScoreMatrix):
                if m.model_id != mid:
                    m = ScoreMatrix(mid, m.values, m.class_names)
                out.append(m)
            else:
                out.append(ScoreMatrix(str(mid), m))
        return out
    return list(models)


def _validate(config: LayerConfig):
    scores = _normalize_models(config.models)
    if len(scores) < 2:
        raise InvalidInput(f"need at least two base models, got {len(scores)}")
    ids = [s.model_id for s in scores]
    if len(set(ids)) != len(ids):
        raise InvalidInput(f"duplicate model ids in {ids}")
    check_aligned(scores)
    schemes = parse_schemes(config.schemes)
    if config.batch_size < 1:
        raise InvalidInput(f"batch_size must be >= 1, got {config.batch_size}")
    if config.tie_policy not in TIE_POLICIES:
        raise InvalidInput(f"unknown tie policy {config.tie_policy!r}")
    if config.mode not in ("supervised", "unsupervised"):
        raise InvalidInput(f"mode must be supervised or unsupervised, got {config.mode!r}")
    if config.rank_ds_source not in ("rank", "score"):
        raise InvalidInput(f"rank_ds_source must be 'rank' or 'score', got {config.rank_ds_source!r}")
    k = len(scores) if config.k is None else int(config.k)
    if k < 1:
        raise InvalidInput(f"k must be >= 1, got {k}")
    n_samples, n_classes = scores[0].shape
    labels = None
    if config.labels is not None:
        labels = check_labels(config.labels, n_samples, n_classes)
    elif config.mode == "supervised":
        raise MissingLabels("supervised mode needs labels; pass labels or use mode='unsupervised'")
    return scores, schemes, k, labels


def _batch_tables(schemes, batch_scores, batch_ranks, global_wcp, rank_ds_source):
    tables = {}
    for scheme in schemes:
        if scheme is Scheme.WCP:
            tables[scheme] = global_wcp
        elif scheme is Scheme.WCDS:
            score_t = compute_weights(scheme, batch_scores, kind="score")
            rank_t = compute_weights(scheme, batch_scores, kind=rank_ds_source, ranks=batch_ranks)
            tables[scheme] = {"score": score_t, "rank": rank_t}
        else:
            tables[scheme] = compute_weights(scheme, batch_scores)
    return tables


def run_layer(config: LayerConfig) -> LayerResult:
    """Run one complete fusion pass and, if ``output_dir`` is set, write its artifacts."""
    scores, schemes, k, labels = _validate(config)
    ids = [s.model_id for s in scores]
    n_samples = scores[0].n_samples
    ranks = [rank_rows(s, config.tie_policy) for s in scores]

    base_preds = {s.model_id: decode(s.values, "score") for s in scores}
    pseudo = labels is None
    truth = majority_vote(list(base_preds.values())) if pseudo else labels
    base_acc = {m: accuracy(p, truth) for m, p in base_preds.items()}

    # WCP weights are dataset-wide constants, never per batch.
    global_wcp = WeightTable(Scheme.WCP, performance_weights(scores, truth)) if Scheme.WCP in schemes else None
    combos = enumerate_combinations(ids)

    parts: dict[FusionKey, list] = {}
    for rows in split_batches(n_samples, config.batch_size):
        sl = slice(rows.start, rows.stop)
        b_scores = [ScoreMatrix(s.model_id, s.values[sl], s.class_names) for s in scores]
        b_ranks = [type(r)(r.model_id, r.values[sl], r.policy) for r in ranks]
        tables = _batch_tables(schemes, b_scores, b_ranks, global_wcp, config.rank_ds_source)
        fs, fr = run_cfa(b_scores, b_ranks, tables, combos)
        for key, model in {**fs, **fr}.items():
            parts.setdefault(key, []).append((rows, model.matrix))

    fused: dict[FusionKey, FusionModel] = {}
    for scheme in schemes:
        for kind in KINDS:
            for c in combos:
                key = FusionKey(scheme, kind, c)
                model = FusionModel(key, merge_batches(parts[key], n_samples))
                model.accuracy = accuracy(model.predictions(), truth)
                fused[key] = model

    report = AccuracyReport(base_acc, {key: m.accuracy for key, m in fused.items()}, pseudo)
    trends = {
        scheme: [
            TrendRow(c, fused[FusionKey(scheme, "score", c)].accuracy, fused[FusionKey(scheme, "rank", c)].accuracy)
            for c in combos
        ]
        for scheme in schemes
    }
    top = top_k(report.fused, base_acc, k)
    selection = select_output(top, base_acc, {s.model_id: s for s in scores}, fused)
    rsc = {s.model_id: average_rsc(rsc_of_score_row(s.values)) for s in scores}
    log.info("selected %s at %.2f%% (best base %s)", selection.best.id, selection.best.accuracy, report.best_base)

    result = LayerResult(
        best=selection.best,
        top_k=top,
        accuracy_report=report,
        matrix=selection.matrix,
        predictions=selection.predictions,
        trends=trends,
        rsc_curves=rsc,
        fused=fused,
        labels=truth,
        config=config,
        schemes=schemes,
        model_ids=ids,
        class_names=scores[0].class_names,
    )
    if config.output_dir is not None:
        from .io import write_outputs

        write_outputs(result, config.output_dir, svg=config.svg)
    return result
