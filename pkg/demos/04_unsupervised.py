"""
Unsupervised selection
======================

Without labels the base models' majority vote stands in for the truth. Here
three models are each right on 70% of samples and wrong on disjoint blocks,
so the vote recovers every label and the fused model is correct everywhere.
"""

from cfafuse import LayerConfig, accuracy, run_layer
from cfafuse.synthetic import disjoint_error_ensemble

models, truth = disjoint_error_ensemble(n_samples=300, n_classes=5)
result = run_layer(LayerConfig(models, labels=None, mode="unsupervised"))

print("pseudo-accuracy of base models:", result.accuracy_report.base)
print("selected:", result.best.id)
print("pseudo-labels vs truth: %.1f%%" % accuracy(result.labels, truth))
print("selected model vs truth: %.1f%%" % accuracy(result.predictions, truth))
