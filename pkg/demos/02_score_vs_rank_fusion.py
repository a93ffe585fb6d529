"""
Score fusion versus rank fusion
===============================

Fuse two models on a handful of samples under each weighting scheme and
compare the decoded predictions. Score fusion averages scores and takes the
argmax; rank fusion averages ranks (with inverted weights) and takes the
argmin.
"""

import numpy as np

from cfafuse import Combination, Scheme, ScoreMatrix, compute_weights, decode, fuse_ranks, fuse_scores, rank_rows

labels = np.array([0, 1, 2, 1])
a = ScoreMatrix("A", [[0.7, 0.2, 0.1], [0.5, 0.4, 0.1], [0.1, 0.3, 0.6], [0.3, 0.3, 0.4]])
b = ScoreMatrix("B", [[0.4, 0.5, 0.1], [0.1, 0.8, 0.1], [0.2, 0.2, 0.6], [0.1, 0.6, 0.3]])
pair = Combination(("A", "B"), (0, 1))

for scheme in Scheme:
    score_w = compute_weights(scheme, [a, b], labels, kind="score")
    rank_w = compute_weights(scheme, [a, b], labels, kind="rank")
    fs = fuse_scores(pair, [a, b], score_w)
    fr = fuse_ranks(pair, [rank_rows(a), rank_rows(b)], rank_w)
    print(f"{scheme.value:5s} score -> {decode(fs.matrix, 'score')}  rank -> {decode(fr.matrix, 'rank')}")

print("truth:", labels)
