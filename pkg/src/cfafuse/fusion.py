"""Model subsets, weighting schemes and weighted score/rank fusion.

Score fusion is a weighted mean of member score matrices followed by per-row
min-max normalization. Rank fusion is a weighted mean of member rank matrices
with inverted weights (a heavily weighted model pulls ranks harder), left
unnormalized. Members whose weight is zero on a row are skipped on that row;
a row where every member is skipped falls back to the plain mean.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import InvalidInput, MissingLabels
from .matrix import Kind, RankMatrix, ScoreMatrix, decode, normalize_row_scores, rank_rows
from .rsc import diversity_strengths, rank_curves, score_curves
from .selection import accuracy, majority_vote

KINDS: tuple[Kind, ...] = ("score", "rank")


class Scheme(str, enum.Enum):
    """Weighting scheme applied to every combination."""

    AC = "AC"  # average combination
    WCDS = "WCDS"  # weighted by per-sample diversity strength
    WCP = "WCP"  # weighted by base-model performance

    def __str__(self):
        return self.value


_SCHEME_ORDER = {s: i for i, s in enumerate(Scheme)}


def parse_schemes(spec: str | Iterable) -> list[Scheme]:
    """Parse ``"AC,WCDS,WCP"`` (or an iterable of names) into schemes.

    Duplicates are dropped, order is kept.
    """
    items = spec.split(",") if isinstance(spec, str) else list(spec)
    out: list[Scheme] = []
    for item in items:
        name = str(item).strip().upper()
        if not name:
            continue
        try:
            scheme = Scheme(name)
        except ValueError:
            raise InvalidInput(
                f"unknown weighting scheme {item!r}; expected one of "
                f"{', '.join(s.value for s in Scheme)}"
            ) from None
        if scheme not in out:
            out.append(scheme)
    if not out:
        raise InvalidInput("at least one weighting scheme is required")
    return out


@dataclass(frozen=True)
class Combination:
    """A subset of two or more base models, kept in input order."""

    members: tuple[str, ...]
    positions: tuple[int, ...]

    @property
    def id(self) -> str:
        return "+".join(self.members)

    @property
    def sort_key(self):
        return (len(self.positions), self.positions)

    def __len__(self):
        return len(self.members)

    def __str__(self):
        return self.id


def enumerate_combinations(models: Sequence[str]) -> list[Combination]:
    """All subsets of size 2..t, ordered by size and then by input position."""
    models = list(models)
    if len(models) < 2:
        raise InvalidInput(f"need at least two models to combine, got {len(models)}")
    if len(set(models)) != len(models):
        raise InvalidInput("model ids must be unique")
    out = []
    for size in range(2, len(models) + 1):
        for pos in itertools.combinations(range(len(models)), size):
            out.append(Combination(tuple(models[p] for p in pos), pos))
    return out


@dataclass(frozen=True)
class FusionKey:
    """Identity of a fused model: weighting scheme, kind and member subset."""

    scheme: Scheme
    kind: Kind
    combination: Combination

    @property
    def id(self) -> str:
        return f"{self.scheme.value}/{self.kind}/{self.combination.id}"

    @property
    def sort_key(self):
        return (
            self.combination.sort_key,
            KINDS.index(self.kind),
            _SCHEME_ORDER[self.scheme],
        )

    def __str__(self):
        return self.id


@dataclass
class FusionModel:
    key: FusionKey
    matrix: np.ndarray
    accuracy: float | None = None

    @property
    def kind(self) -> Kind:
        return self.key.kind

    def predictions(self) -> np.ndarray:
        return decode(self.matrix, self.kind)


@dataclass
class WeightTable:
    """Per-model weights for one scheme.

    A weight is either a scalar shared by all samples or a vector with one
    entry per sample.
    """

    scheme: Scheme
    weights: dict[str, float | np.ndarray]

    def column(self, model_id: str, n_rows: int) -> np.ndarray:
        try:
            w = self.weights[model_id]
        except KeyError:
            raise InvalidInput(f"no {self.scheme} weight for model {model_id!r}") from None
        col = np.broadcast_to(np.asarray(w, dtype=np.float64), (n_rows,))
        if np.any(col < 0) or not np.all(np.isfinite(col)):
            raise InvalidInput(f"{self.scheme} weights of {model_id!r} must be finite and >= 0")
        return col

    def scaled(self, factor: float) -> "WeightTable":
        return WeightTable(
            self.scheme, {m: np.asarray(w, dtype=np.float64) * factor for m, w in self.weights.items()}
        )


def _values(matrices) -> dict[str, np.ndarray]:
    if isinstance(matrices, Mapping):
        return {k: np.asarray(getattr(v, "values", v), dtype=np.float64) for k, v in matrices.items()}
    return {m.model_id: np.asarray(m.values, dtype=np.float64) for m in matrices}


def performance_weights(scores: Sequence[ScoreMatrix], labels) -> dict[str, float]:
    """Accuracy of every base model as a fraction in ``[0, 1]``."""
    return {s.model_id: accuracy(decode(s.values, "score"), labels) / 100.0 for s in scores}


def compute_weights(
    scheme: Scheme | str,
    scores: Sequence[ScoreMatrix],
    labels=None,
    *,
    kind: Kind = "score",
    ranks: Sequence[RankMatrix] | None = None,
    unsupervised: bool = False,
) -> WeightTable:
    """Build the weight table of one scheme.

    ``kind`` selects the representation whose RSC curves feed the WCDS
    diversity strengths: score curves for ``"score"``, rank curves for
    ``"rank"``. WCP needs ``labels``; with ``unsupervised=True`` and no
    labels, the base models' majority vote stands in.
    """
    scheme = Scheme(str(scheme).upper()) if not isinstance(scheme, Scheme) else scheme
    scores = list(scores)
    ids = [s.model_id for s in scores]
    if scheme is Scheme.AC:
        return WeightTable(scheme, {m: 1.0 for m in ids})
    if scheme is Scheme.WCDS:
        if len(scores) < 2:
            raise InvalidInput("WCDS needs at least two models")
        if kind == "rank":
            if ranks is None:
                ranks = [rank_rows(s) for s in scores]
            curves = rank_curves([r.values for r in ranks])
        else:
            curves = score_curves([s.values for s in scores])
        ds = diversity_strengths(curves)
        return WeightTable(scheme, {m: ds[j] for j, m in enumerate(ids)})
    if labels is None:
        if not unsupervised:
            raise MissingLabels("WCP needs ground-truth labels or unsupervised mode")
        labels = majority_vote([decode(s.values, "score") for s in scores])
    return WeightTable(scheme, performance_weights(scores, labels))


def _fuse(values: Mapping[str, np.ndarray], combination: Combination, table: WeightTable, kind: Kind):
    members = combination.members
    missing = [m for m in members if m not in values]
    if missing:
        raise InvalidInput(f"combination {combination.id} refers to unknown models {missing}")
    n_rows, n_cols = values[members[0]].shape
    num = np.zeros((n_rows, n_cols))
    den = np.zeros(n_rows)
    for m in members:
        w = table.column(m, n_rows)
        active = w > 0
        if kind == "score":
            eff = np.where(active, w, 0.0)
        else:
            eff = np.where(active, 1.0 / np.where(active, w, 1.0), 0.0)
        num += values[m] * eff[:, None]
        den += eff
    dead = den == 0
    if dead.any():
        plain = np.zeros((int(dead.sum()), n_cols))
        for m in members:
            plain += values[m][dead]
        num[dead] = plain
        den[dead] = len(members)
    fused = num / den[:, None]
    if kind == "score":
        fused = normalize_row_scores(fused)
    return fused


def fuse_scores(combination: Combination, scores, weights: WeightTable) -> FusionModel:
    """Weighted score combination of the members, row-normalized to ``[0, 1]``."""
    matrix = _fuse(_values(scores), combination, weights, "score")
    return FusionModel(FusionKey(weights.scheme, "score", combination), matrix)


def fuse_ranks(combination: Combination, ranks, weights: WeightTable) -> FusionModel:
    """Inverse-weighted rank combination of the members (not normalized)."""
    matrix = _fuse(_values(ranks), combination, weights, "rank")
    return FusionModel(FusionKey(weights.scheme, "rank", combination), matrix)


def _table_for(entry, kind: Kind) -> WeightTable:
    if isinstance(entry, WeightTable):
        return entry
    return entry[kind]


def run_cfa(scores, ranks, weight_tables: Mapping, combinations: Sequence[Combination]):
    """Fuse every combination under every scheme, for scores and for ranks.

    ``weight_tables`` maps a scheme to either one :class:`WeightTable` used for
    both kinds, or to a ``{"score": ..., "rank": ...}`` mapping.

    Returns ``(fused_scores, fused_ranks)``, two dicts keyed by
    :class:`FusionKey` in scheme-then-combination order.
    """
    if not weight_tables:
        raise InvalidInput("at least one weighting scheme is required")
    sv, rv = _values(scores), _values(ranks)
    if set(sv) != set(rv):
        raise InvalidInput("score and rank inputs cover different models")
    shapes = {v.shape for v in sv.values()} | {v.shape for v in rv.values()}
    if len(shapes) != 1:
        raise InvalidInput(f"score/rank matrices disagree in shape: {sorted(shapes)}")
    fused_scores: dict[FusionKey, FusionModel] = {}
    fused_ranks: dict[FusionKey, FusionModel] = {}
    for scheme, entry in weight_tables.items():
        score_table, rank_table = _table_for(entry, "score"), _table_for(entry, "rank")
        for c in combinations:
            fs = fuse_scores(c, sv, score_table)
            fr = fuse_ranks(c, rv, rank_table)
            fused_scores[fs.key] = fs
            fused_ranks[fr.key] = fr
    return fused_scores, fused_ranks
