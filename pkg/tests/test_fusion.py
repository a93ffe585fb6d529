import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from numpy.testing import assert_allclose, assert_array_equal

from cfafuse.errors import InvalidInput, MissingLabels
from cfafuse.fusion import (
    Combination,
    Scheme,
    WeightTable,
    compute_weights,
    enumerate_combinations,
    fuse_ranks,
    fuse_scores,
    parse_schemes,
    run_cfa,
)
from cfafuse.matrix import ScoreMatrix, normalize_row_scores, rank_rows

from reference import ref_fuse


def _combo(*ids):
    return Combination(tuple(ids), tuple(range(len(ids))))


def _brute_subsets(items):
    out = []
    for mask in range(1, 2 ** len(items)):
        sub = [items[i] for i in range(len(items)) if mask >> i & 1]
        if len(sub) > 1:
            out.append(tuple(sub))
    return out


@pytest.mark.parametrize("t", [2, 3, 4, 5, 6])
def test_enumeration_matches_brute_force(t):
    ids = [chr(ord("A") + i) for i in range(t)]
    combos = enumerate_combinations(ids)
    assert sorted(c.members for c in combos) == sorted(_brute_subsets(ids))
    keys = [c.sort_key for c in combos]
    assert keys == sorted(keys)


def test_enumeration_examples():
    assert len(enumerate_combinations("ABCDE")) == 26
    assert [c.id for c in enumerate_combinations("AB")] == ["A+B"]
    assert [c.id for c in enumerate_combinations("ABC")] == ["A+B", "A+C", "B+C", "A+B+C"]
    with pytest.raises(InvalidInput):
        enumerate_combinations(["A"])
    with pytest.raises(InvalidInput):
        enumerate_combinations(["A", "A"])


def test_parse_schemes():
    assert parse_schemes("AC, wcds,WCP,AC") == [Scheme.AC, Scheme.WCDS, Scheme.WCP]
    with pytest.raises(InvalidInput):
        parse_schemes("AC,XYZ")
    with pytest.raises(InvalidInput):
        parse_schemes("")


def test_fuse_scores_hand_example():
    s = {"A": np.array([[0.9, 0.0]]), "B": np.array([[0.3, 0.0]])}
    fused = fuse_scores(_combo("A", "B"), s, WeightTable(Scheme.WCP, {"A": 2.0, "B": 1.0}))
    # (2*0.9 + 1*0.3)/3 = 0.7 and 0.0 before normalization.
    assert_allclose(fused.matrix, [[1.0, 0.0]])
    s3 = {"A": np.array([[0.9, 0.0, 1.0]]), "B": np.array([[0.3, 0.0, 1.0]])}
    fused = fuse_scores(_combo("A", "B"), s3, WeightTable(Scheme.WCP, {"A": 2.0, "B": 1.0}))
    assert_allclose(fused.matrix, [[0.7, 0.0, 1.0]])


def test_fuse_scores_identical_and_skip():
    rng = np.random.default_rng(0)
    m = rng.normal(size=(6, 4))
    fused = fuse_scores(_combo("A", "B"), {"A": m, "B": m}, WeightTable(Scheme.AC, {"A": 1.0, "B": 1.0}))
    assert_allclose(fused.matrix, normalize_row_scores(m), atol=1e-15)
    other = rng.normal(size=(6, 4))
    fused = fuse_scores(_combo("A", "B"), {"A": other, "B": m}, WeightTable(Scheme.WCDS, {"A": 0.0, "B": 1.0}))
    assert_array_equal(fused.matrix, normalize_row_scores(m))


def test_all_zero_row_falls_back_to_plain_mean():
    a = np.array([[1.0, 0.0, 3.0], [0.0, 2.0, 1.0]])
    b = np.array([[3.0, 2.0, 1.0], [4.0, 0.0, 1.0]])
    w = WeightTable(Scheme.WCDS, {"A": np.array([0.0, 0.5]), "B": np.array([0.0, 0.0])})
    fr = fuse_ranks(_combo("A", "B"), {"A": a, "B": b}, w)
    assert_allclose(fr.matrix, [[2.0, 1.0, 2.0], a[1]])
    fs = fuse_scores(_combo("A", "B"), {"A": a, "B": b}, w)
    assert_allclose(fs.matrix[0], normalize_row_scores([2.0, 1.0, 2.0]))


def test_fuse_ranks_examples():
    r = {"A": np.array([[1.0, 2.0]]), "B": np.array([[3.0, 1.0]])}
    fr = fuse_ranks(_combo("A", "B"), r, WeightTable(Scheme.WCP, {"A": 2.0, "B": 1.0}))
    assert fr.matrix[0, 0] == pytest.approx(7 / 3, rel=1e-15)
    fr = fuse_ranks(_combo("A", "B"), r, WeightTable(Scheme.AC, {"A": 1.0, "B": 1.0}))
    assert fr.matrix[0, 0] == 2.0
    fr = fuse_ranks(_combo("A", "B"), {"A": r["A"], "B": r["A"]}, WeightTable(Scheme.WCP, {"A": 0.3, "B": 0.9}))
    assert_allclose(fr.matrix, r["A"])


def test_compute_weights():
    labels = np.array([0, 1, 1])
    a = ScoreMatrix("A", np.eye(3))  # predicts [0, 1, 2]
    b = ScoreMatrix("B", np.eye(3))
    assert compute_weights("AC", [a, b]).weights == {"A": 1.0, "B": 1.0}
    wcp = compute_weights(Scheme.WCP, [a, b], labels)
    assert wcp.weights["A"] == pytest.approx(2 / 3)
    wcds = compute_weights(Scheme.WCDS, [a, b])
    assert_array_equal(wcds.weights["A"], [0, 0, 0])
    assert_array_equal(compute_weights(Scheme.WCDS, [a, b], kind="rank").weights["B"], [0, 0, 0])
    with pytest.raises(MissingLabels):
        compute_weights(Scheme.WCP, [a, b])
    pseudo = compute_weights(Scheme.WCP, [a, b], unsupervised=True)
    assert pseudo.weights == {"A": 1.0, "B": 1.0}


def test_wcds_weights_for_two_models_equal_their_cd():
    rng = np.random.default_rng(4)
    a = ScoreMatrix("A", rng.normal(size=(10, 5)))
    b = ScoreMatrix("B", rng.normal(size=(10, 5)) ** 3)
    w = compute_weights(Scheme.WCDS, [a, b])
    assert_array_equal(w.weights["A"], w.weights["B"])
    assert np.all(w.weights["A"] > 0)


def test_weight_table_rejects_negative():
    with pytest.raises(InvalidInput):
        WeightTable(Scheme.WCP, {"A": -1.0}).column("A", 2)
    with pytest.raises(InvalidInput):
        WeightTable(Scheme.WCP, {"A": 1.0}).column("B", 2)


def _random_case(rng, t, n, c, zero_frac=0.2):
    ids = [f"m{j}" for j in range(t)]
    scores = {m: rng.normal(size=(n, c)) for m in ids}
    ranks = {m: rank_rows(ScoreMatrix(m, v)).values for m, v in scores.items()}
    weights = {}
    for m in ids:
        w = rng.uniform(0.05, 2.0, n)
        w[rng.random(n) < zero_frac] = 0.0
        weights[m] = w
    return ids, scores, ranks, weights


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 5), st.integers(1, 20), st.integers(2, 6), st.integers(0, 2**32 - 1))
def test_fusion_matches_reference_loops(t, n, c, seed):
    rng = np.random.default_rng(seed)
    ids, scores, ranks, weights = _random_case(rng, t, n, c)
    combo = Combination(tuple(ids), tuple(range(t)))
    table = WeightTable(Scheme.WCDS, weights)
    w_lists = [list(weights[m]) for m in ids]
    fs = fuse_scores(combo, scores, table).matrix
    fr = fuse_ranks(combo, ranks, table).matrix
    assert_allclose(fs, ref_fuse([scores[m].tolist() for m in ids], w_lists, "score"), rtol=1e-9, atol=1e-12)
    assert_allclose(fr, ref_fuse([ranks[m].tolist() for m in ids], w_lists, "rank"), rtol=1e-9)


@settings(max_examples=30, deadline=None)
@given(st.integers(2, 5), st.integers(0, 2**32 - 1), st.floats(1e-3, 1e3))
def test_weight_scale_invariance_and_member_order(t, seed, factor):
    rng = np.random.default_rng(seed)
    ids, scores, ranks, weights = _random_case(rng, t, 12, 5)
    table = WeightTable(Scheme.WCDS, weights)
    combo = Combination(tuple(ids), tuple(range(t)))
    flipped = Combination(tuple(reversed(ids)), tuple(reversed(range(t))))
    for fuse, data in ((fuse_scores, scores), (fuse_ranks, ranks)):
        base = fuse(combo, data, table).matrix
        assert_allclose(fuse(combo, data, table.scaled(factor)).matrix, base, rtol=1e-12, atol=1e-12)
        assert_allclose(fuse(flipped, data, table).matrix, base, rtol=1e-12, atol=1e-12)


def test_equal_weights_reduce_to_average_combination():
    rng = np.random.default_rng(1)
    ids, scores, ranks, _ = _random_case(rng, 4, 15, 6)
    combo = Combination(tuple(ids), tuple(range(4)))
    ac = WeightTable(Scheme.AC, {m: 1.0 for m in ids})
    equal = WeightTable(Scheme.WCP, {m: 0.37 for m in ids})
    plain_scores = normalize_row_scores(np.mean([scores[m] for m in ids], axis=0))
    plain_ranks = np.mean([ranks[m] for m in ids], axis=0)
    assert_allclose(fuse_scores(combo, scores, ac).matrix, plain_scores, atol=1e-12)
    assert_allclose(fuse_scores(combo, scores, equal).matrix, plain_scores, atol=1e-12)
    assert_allclose(fuse_ranks(combo, ranks, equal).matrix, plain_ranks, atol=1e-12)


def test_run_cfa_counts_and_errors():
    rng = np.random.default_rng(2)
    ids, scores, ranks, _ = _random_case(rng, 5, 8, 4)
    combos = enumerate_combinations(ids)
    ac = WeightTable(Scheme.AC, {m: 1.0 for m in ids})
    fs, fr = run_cfa(scores, ranks, {Scheme.AC: ac}, combos)
    assert len(fs) + len(fr) == 52
    two = enumerate_combinations(ids[:2])
    tables = {s: WeightTable(s, {m: 1.0 for m in ids}) for s in Scheme}
    fs, fr = run_cfa(scores, ranks, tables, two)
    assert len(fs) + len(fr) == 6
    with pytest.raises(InvalidInput):
        run_cfa(scores, ranks, {}, combos)
    bad = dict(ranks)
    bad[ids[0]] = bad[ids[0]][:3]
    with pytest.raises(InvalidInput):
        run_cfa(scores, bad, {Scheme.AC: ac}, combos)
