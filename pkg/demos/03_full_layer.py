"""
A full fusion pass
==================

Five synthetic classifiers, every subset of two or more, three weighting
schemes: 156 fused models. The pass keeps the best fused model that beats
the best base model and writes its artifacts to ``./run_demo``.

The same run from the shell::

    python demos/03_full_layer.py            # writes ./demo_data and ./run_demo
    cfa-fuse --models demo_data/*.csv --labels demo_data/labels.txt \\
             --weights AC,WCDS,WCP --out ./run_cli
"""

from cfafuse import LayerConfig, run_layer
from cfafuse.synthetic import benchmark_ensemble, write_dataset

models, labels = benchmark_ensemble(n_samples=1000, n_classes=10, n_models=5, seed=0)
write_dataset(models, labels, "demo_data")

result = run_layer(LayerConfig(models, labels, schemes="AC,WCDS,WCP", batch_size=256, output_dir="run_demo"))

print("base accuracy:", result.accuracy_report.base)
print("top-k:")
for key, acc in result.top_k:
    print(f"  {key.id:28s} {acc:6.2f}")
print("selected:", result.best.id, f"{result.best.accuracy:.2f}%")

print("\nAC trend (combination, score acc, rank acc):")
for row in result.trends[next(iter(result.trends))]:
    print(f"  {row.combination.id:10s} {row.score_accuracy:6.2f} {row.rank_accuracy:6.2f}")
