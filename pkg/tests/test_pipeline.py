import numpy as np
import pytest
from numpy.testing import assert_array_equal

from cfafuse.errors import InternalError, InvalidInput, MissingLabels
from cfafuse.matrix import ScoreMatrix
from cfafuse.pipeline import LayerConfig, merge_batches, run_layer, split_batches
from cfafuse.synthetic import benchmark_ensemble, disjoint_error_ensemble


def test_split_batches():
    assert split_batches(10, 4) == [range(0, 4), range(4, 8), range(8, 10)]
    assert split_batches(3, 100) == [range(0, 3)]
    assert split_batches(0, 5) == []
    with pytest.raises(InvalidInput):
        split_batches(10, 0)


def test_merge_batches():
    a, b = np.ones((4, 3)), np.zeros((6, 3))
    assert_array_equal(merge_batches([(range(0, 4), a)]), a)
    assert merge_batches([(range(0, 4), a), (range(4, 10), b)], 10).shape == (10, 3)
    with pytest.raises(InternalError, match="gap"):
        merge_batches([(range(0, 4), a), (range(5, 11), b)])
    with pytest.raises(InternalError, match="overlap"):
        merge_batches([(range(0, 4), a), (range(3, 9), b)])
    with pytest.raises(InternalError):
        merge_batches([(range(0, 4), a)], 10)


def test_counts_single_and_all_schemes():
    models, y = benchmark_ensemble(60, 6, 5, seed=1)
    one = run_layer(LayerConfig(models, y, schemes="WCDS"))
    kinds = [k.kind for k in one.accuracy_report.fused]
    assert kinds.count("score") == 26 and kinds.count("rank") == 26
    every = run_layer(LayerConfig(models, y, schemes="AC,WCDS,WCP"))
    assert len(every.accuracy_report.fused) == 156
    assert all(len(rows) == 26 for rows in every.trends.values())


def test_identical_models_fall_back_to_base():
    rng = np.random.default_rng(0)
    v = rng.normal(size=(30, 4))
    y = rng.integers(0, 4, 30)
    res = run_layer(LayerConfig([ScoreMatrix("A", v), ScoreMatrix("B", v)], y, schemes="AC"))
    base = res.accuracy_report.base["A"]
    assert all(a == base for k, a in res.accuracy_report.fused.items() if k.kind == "score")
    assert res.best.kind == "base" and res.best.id == "A"
    assert res.top_k == []


def test_disjoint_errors_improve_on_every_base():
    models, y = disjoint_error_ensemble()
    res = run_layer(LayerConfig(models, y, schemes="AC"))
    asc = [a for k, a in res.accuracy_report.fused.items() if k.kind == "score" and len(k.combination) == 3]
    assert asc[0] > max(res.accuracy_report.base.values())
    assert res.best.kind != "base"


def test_configuration_errors():
    models, y = benchmark_ensemble(20, 4, 3)
    with pytest.raises(MissingLabels):
        run_layer(LayerConfig(models))
    with pytest.raises(InvalidInput):
        run_layer(LayerConfig(models[:1], y))
    with pytest.raises(InvalidInput):
        run_layer(LayerConfig(models, y, schemes=""))
    with pytest.raises(InvalidInput):
        run_layer(LayerConfig(models, y, batch_size=0))
    short = ScoreMatrix("X", models[0].values[:10], models[0].class_names)
    with pytest.raises(InvalidInput):
        run_layer(LayerConfig([*models, short], y))
    renamed = ScoreMatrix("Y", models[0].values, tuple(reversed(models[0].class_names)))
    with pytest.raises(InvalidInput):
        run_layer(LayerConfig([*models, renamed], y))


def test_mapping_input_and_rank_ds_switch():
    models, y = benchmark_ensemble(40, 5, 3, seed=2)
    as_map = {m.model_id: m.values for m in models}
    a = run_layer(LayerConfig(as_map, y, schemes="WCDS"))
    b = run_layer(LayerConfig(models, y, schemes="WCDS", rank_ds_source="score"))
    assert list(a.accuracy_report.base) == ["A", "B", "C"]
    score_a = {k.id: v for k, v in a.accuracy_report.fused.items() if k.kind == "score"}
    score_b = {k.id: v for k, v in b.accuracy_report.fused.items() if k.kind == "score"}
    assert score_a == score_b


def test_unsupervised_uses_majority_vote():
    models, y = disjoint_error_ensemble()
    res = run_layer(LayerConfig(models, None, mode="unsupervised"))
    assert res.pseudo
    assert_array_equal(res.labels, y)
    assert res.best.kind != "base"
    again = run_layer(LayerConfig(models, None, mode="unsupervised"))
    assert again.best == res.best and again.accuracy_report.fused == res.accuracy_report.fused
