import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.optimize import linprog

from stylograph.errors import (
    ClassTooSmall,
    DimensionMismatch,
    EmptyWordSet,
    LengthMismatch,
    TooFewSamples,
)
from stylograph.learning import (
    ClusterResult,
    KMeansConfig,
    SplitSpec,
    SvmConfig,
    UNMATCHED,
    combine_dual_clustering,
    confusion_matrix,
    contingency,
    hungarian_align,
    jaccard,
    jaccard_spectral_cluster,
    kmeans,
    predict,
    stratified_split,
    train_linear_svm,
    weighted_f1,
)


def exhaustive_agreement(pred, truth):
    """Best matched count over every injective cluster -> label map."""
    clusters = sorted(set(pred))
    labels = sorted(set(truth))
    size = max(len(clusters), len(labels))
    table = np.zeros((size, size), dtype=int)
    for p, t in zip(pred, truth):
        table[clusters.index(p), labels.index(t)] += 1
    return max(sum(table[i, perm[i]] for i in range(size))
               for perm in itertools.permutations(range(size)))


def brute_two_means(X):
    best = None
    n = len(X)
    for mask in range(1, 2 ** (n - 1)):
        groups = [np.array([X[i] for i in range(n) if (mask >> i) & 1 == g]) for g in (0, 1)]
        if any(len(g) == 0 for g in groups):
            continue
        inertia = sum(((g - g.mean(axis=0)) ** 2).sum() for g in groups)
        best = inertia if best is None else min(best, inertia)
    return best


def is_linearly_separable(X, y):
    """LP feasibility of y_i (w.x_i + b) >= 1."""
    s = np.where(np.asarray(y) == y[0], 1.0, -1.0)
    A = -s[:, None] * np.hstack([X, np.ones((len(X), 1))])
    res = linprog(np.zeros(X.shape[1] + 1), A_ub=A, b_ub=-np.ones(len(X)),
                  bounds=[(None, None)] * (X.shape[1] + 1))
    return res.status == 0


class TestSplit:
    def test_ratio(self):
        ids = [f"d{i}" for i in range(10)]
        labels = ["A"] * 5 + ["B"] * 5
        train, test = stratified_split(ids, labels, SplitSpec(0.7, seed=3))
        assert len(train) == 7 and len(test) == 3
        per_class = sorted(sum(1 for d in train if labels[ids.index(d)] == c) for c in "AB")
        assert per_class == [3, 4]
        assert set(train).isdisjoint(test) and set(train) | set(test) == set(ids)

    def test_deterministic(self):
        ids = [f"d{i}" for i in range(30)]
        labels = ["A", "B", "C"] * 10
        assert stratified_split(ids, labels, SplitSpec(seed=9)) == stratified_split(ids, labels, SplitSpec(seed=9))

    def test_class_too_small(self):
        with pytest.raises(ClassTooSmall):
            stratified_split(["a", "b", "c"], ["A", "A", "B"])

    @given(st.lists(st.integers(2, 12), min_size=2, max_size=5), st.floats(0.1, 0.9), st.integers(0, 99))
    def test_every_class_on_both_sides(self, sizes, ratio, seed):
        labels = [f"c{i}" for i, s in enumerate(sizes) for _ in range(s)]
        ids = [str(i) for i in range(len(labels))]
        train, test = stratified_split(ids, labels, SplitSpec(ratio, seed))
        for c in set(labels):
            assert any(labels[int(d)] == c for d in train)
            assert any(labels[int(d)] == c for d in test)


def blobs(seed, n=20):
    rng = np.random.default_rng(seed)
    X = np.vstack([rng.normal([0, 0], 0.3, size=(n // 2, 2)), rng.normal([4, 4], 0.3, size=(n // 2, 2))])
    y = ["neg"] * (n // 2) + ["pos"] * (n // 2)
    return X, y


class TestSvm:
    def test_separable_blobs(self):
        X, y = blobs(0)
        assert is_linearly_separable(X, y)
        model = train_linear_svm(X, y, SvmConfig(seed=1))
        assert predict(model, X) == y

    def test_three_classes(self):
        rng = np.random.default_rng(5)
        centres = np.array([[0, 0], [6, 0], [0, 6]])
        X = np.vstack([rng.normal(c, 0.4, size=(10, 2)) for c in centres])
        y = [c for c in "abc" for _ in range(10)]
        assert predict(train_linear_svm(X, y), X) == y

    def test_deterministic(self):
        X, y = blobs(1)
        a = train_linear_svm(X, y, SvmConfig(seed=4))
        b = train_linear_svm(X, y, SvmConfig(seed=4))
        assert np.array_equal(a.weights, b.weights) and predict(a, X) == predict(b, X)

    def test_dimension_mismatch(self):
        X, y = blobs(2)
        with pytest.raises(DimensionMismatch):
            predict(train_linear_svm(X, y), np.zeros((1, 3)))

    def test_constant_feature_is_ignored(self):
        X, y = blobs(3)
        X = np.hstack([X, np.full((len(X), 1), 7.0)])
        model = train_linear_svm(X, y)
        assert model.scale[-1] == 0.0
        assert predict(model, X) == y

    def test_rescaling_invariance(self):
        X, y = blobs(4)
        a = predict(train_linear_svm(X, y), X)
        b = predict(train_linear_svm(X * [1000.0, 0.001], y), X * [1000.0, 0.001])
        assert a == b


class TestKMeans:
    def test_square(self):
        X = np.array([[0, 0], [0, 2], [10, 0], [10, 2]], dtype=float)
        res = kmeans(X, 2)
        a = res.as_labels()
        assert a[0] == a[1] != a[2] == a[3]
        assert res.inertia == pytest.approx(4.0)
        assert res.inertia == pytest.approx(brute_two_means(X))

    def test_single_cluster(self):
        X = np.random.default_rng(0).normal(size=(15, 3))
        res = kmeans(X, 1)
        assert np.allclose(res.centroids[0], X.mean(axis=0))
        assert res.inertia == pytest.approx(((X - X.mean(axis=0)) ** 2).sum())

    def test_far_clouds(self):
        rng = np.random.default_rng(1)
        X = np.vstack([rng.normal(0, 1, size=(12, 2)), rng.normal(1000, 1, size=(8, 2))])
        a = kmeans(X, 2).as_labels()
        assert len(set(a[:12])) == 1 and len(set(a[12:])) == 1 and a[0] != a[12]

    def test_too_few_samples(self):
        with pytest.raises(TooFewSamples):
            kmeans(np.zeros((2, 2)), 3)

    def test_deterministic(self):
        X = np.random.default_rng(2).normal(size=(30, 4))
        assert kmeans(X, 3, KMeansConfig(seed=5)).as_labels() == kmeans(X, 3, KMeansConfig(seed=5)).as_labels()

    @settings(max_examples=25, deadline=None)
    @given(st.integers(0, 10_000), st.integers(2, 4))
    def test_history_monotone_and_near_optimal(self, seed, k):
        X = np.random.default_rng(seed).normal(size=(9, 2))
        res = kmeans(X, k, KMeansConfig(seed=seed))
        h = res.history
        assert all(b <= a + 1e-9 for a, b in zip(h, h[1:]))
        assert len(set(res.as_labels())) == k
        if k == 2:
            assert res.inertia <= brute_two_means(X) * 1.5 + 1e-9


class TestSpectral:
    def test_jaccard(self):
        assert jaccard({"a", "b"}, {"b", "c"}) == pytest.approx(1 / 3)
        assert jaccard({"a"}, {"a"}) == 1.0 and jaccard({"a"}, {"b"}) == 0.0
        with pytest.raises(EmptyWordSet):
            jaccard(set(), set())

    def test_block_families(self):
        fam1 = [{"a", "b", "c"}, {"a", "b"}, {"b", "c"}, {"a", "c", "d"}]
        fam2 = [{"x", "y"}, {"y", "z"}, {"x", "z", "w"}]
        sets = fam1[:2] + fam2[:1] + fam1[2:] + fam2[1:]
        a = jaccard_spectral_cluster(sets, 2, seed=0).as_labels()
        g1 = {a[i] for i in (0, 1, 3, 4)}
        g2 = {a[i] for i in (2, 5, 6)}
        assert len(g1) == 1 and len(g2) == 1 and g1 != g2


class TestCombine:
    labels = ["A"] * 10 + ["B"] * 10

    def test_perfect(self):
        exact = ClusterResult(np.array([0] * 10 + [1] * 10), 2)
        _, truth, pred = combine_dual_clustering(exact, exact, self.labels)
        assert weighted_f1(truth, pred) == 1.0

    def test_constant_gives_majority_baseline(self):
        labels = ["A"] * 14 + ["B"] * 6
        const = ClusterResult(np.zeros(20, dtype=int), 2)
        _, truth, pred = combine_dual_clustering(const, const, labels)
        majority = [max(set(labels), key=labels.count)] * len(truth)
        assert pred == majority
        assert weighted_f1(truth, pred) == pytest.approx(weighted_f1(truth, majority))

    def test_mismatch(self):
        with pytest.raises(LengthMismatch):
            combine_dual_clustering(ClusterResult(np.zeros(3, dtype=int), 1),
                                    ClusterResult(np.zeros(20, dtype=int), 1), self.labels)


class TestMetrics:
    def test_weighted_f1(self):
        assert abs(weighted_f1(list("AABB"), list("ABBB")) - 0.733333333333) <= 1e-9
        assert weighted_f1(list("AB"), list("AB")) == 1.0

    def test_absent_class_has_no_weight(self):
        assert weighted_f1(list("AA"), list("AC")) == pytest.approx(2 / 3)

    def test_confusion(self):
        cm = confusion_matrix(list("AABB"), list("ABBB"))
        assert cm == {"labels": ["A", "B"], "matrix": [[1, 1], [0, 2]]}

    def test_permutation_recovery(self):
        mapping, relabeled, agreement = hungarian_align([0, 0, 1, 1], list("BBAA"))
        assert mapping == {0: "B", 1: "A"} and agreement == 4 and relabeled == list("BBAA")

    def test_contingency_example(self):
        pred = [0] * 4 + [1] * 6
        truth = list("AAAB") + list("AABBBB")
        _, _, table = contingency(pred, truth)
        assert table.tolist() == [[3, 1], [2, 4]]
        mapping, _, agreement = hungarian_align(pred, truth)
        assert mapping == {0: "A", 1: "B"} and agreement == 7

    def test_extra_cluster_unmatched(self):
        mapping, relabeled, agreement = hungarian_align([0, 1, 2], list("AAB"))
        assert list(mapping.values()).count(UNMATCHED) == 1
        assert agreement == 2 and relabeled.count(UNMATCHED) == 1

    @settings(max_examples=60, deadline=None)
    @given(st.integers(0, 10**6))
    def test_matches_exhaustive(self, seed):
        rng = np.random.default_rng(seed)
        k = int(rng.integers(1, 7))
        n = int(rng.integers(1, 40))
        pred = rng.integers(0, k, size=n).tolist()
        truth = [f"L{x}" for x in rng.integers(0, int(rng.integers(1, 7)), size=n)]
        _, _, agreement = hungarian_align(pred, truth)
        assert agreement == exhaustive_agreement(pred, truth)
