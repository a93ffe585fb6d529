"""Combinatorial fusion of multiclass classifier outputs.

Score matrices of several base classifiers are combined over every subset of
two or more models, by weighted score averaging and by weighted rank
averaging, and the fused model that beats the best base model is kept.
"""

__version__ = "0.1.0"

from .errors import (
    CfaError,
    HeaderMismatch,
    InternalError,
    InvalidInput,
    MissingLabels,
    ParseError,
    UnknownClass,
)
from .fusion import (
    Combination,
    FusionKey,
    FusionModel,
    Scheme,
    WeightTable,
    compute_weights,
    enumerate_combinations,
    fuse_ranks,
    fuse_scores,
    parse_schemes,
    run_cfa,
)
from .matrix import (
    RankMatrix,
    ScoreMatrix,
    decode,
    normalize_row_scores,
    rank_rows,
    rank_to_score,
)
from .pipeline import LayerConfig, LayerResult, merge_batches, run_layer, split_batches
from .rsc import (
    average_rsc,
    cd_matrices,
    cognitive_diversity,
    diversity_strength,
    rsc_of_rank_row,
    rsc_of_score_row,
)
from .selection import AccuracyReport, BestModel, accuracy, majority_vote, select_output, top_k

__all__ = [
    "CfaError",
    "HeaderMismatch",
    "InternalError",
    "InvalidInput",
    "MissingLabels",
    "ParseError",
    "UnknownClass",
    "Combination",
    "FusionKey",
    "FusionModel",
    "Scheme",
    "WeightTable",
    "compute_weights",
    "enumerate_combinations",
    "fuse_ranks",
    "fuse_scores",
    "parse_schemes",
    "run_cfa",
    "RankMatrix",
    "ScoreMatrix",
    "decode",
    "normalize_row_scores",
    "rank_rows",
    "rank_to_score",
    "LayerConfig",
    "LayerResult",
    "merge_batches",
    "run_layer",
    "split_batches",
    "average_rsc",
    "cd_matrices",
    "cognitive_diversity",
    "diversity_strength",
    "rsc_of_rank_row",
    "rsc_of_score_row",
    "AccuracyReport",
    "BestModel",
    "accuracy",
    "majority_vote",
    "select_output",
    "top_k",
]
