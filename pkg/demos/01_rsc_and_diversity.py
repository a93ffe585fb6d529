"""
RSC curves and cognitive diversity
==================================

Each sample row of a classifier's output is a score function over classes.
Sorting its normalized scores gives the rank-score characteristic (RSC)
curve; the RMS gap between two models' curves is their cognitive diversity,
and a model's mean diversity against the others is its diversity strength.
"""

import numpy as np

from cfafuse import cd_matrices, cognitive_diversity, rsc_of_rank_row, rsc_of_score_row
from cfafuse.matrix import rank_values
from cfafuse.rsc import diversity_strengths
from cfafuse.synthetic import benchmark_ensemble

# A confident model and a hesitant one, scoring the same 4 classes.
confident = np.array([0.05, 0.90, 0.03, 0.02])
hesitant = np.array([0.20, 0.35, 0.30, 0.15])

f_conf = rsc_of_score_row(confident)
f_hes = rsc_of_score_row(hesitant)
print("confident RSC:", np.round(f_conf, 3))
print("hesitant  RSC:", np.round(f_hes, 3))
print("CD:", round(cognitive_diversity(f_conf, f_hes), 4))

# Rank curves carry no score magnitudes: without ties every model has the same line.
print("rank RSC:", rsc_of_rank_row(rank_values(confident)))

# Per-sample diversity strength for five synthetic models.
models, _ = benchmark_ensemble(n_samples=5, n_classes=10)
curves = np.stack([rsc_of_score_row(m.values) for m in models])
print("CD matrix, first sample:\n", np.round(cd_matrices(curves)[0], 3))
print("DS per model, first sample:", np.round(diversity_strengths(curves)[:, 0], 3))
