"""Nearest-neighbour classifier against an independent brute-force oracle.

The oracle below re-implements the full contract from scratch in plain
Python: distances in index order, neighbours sorted by (distance, index),
majority vote, vote ties to the smallest mean neighbour distance, then to
class order. Squares are summed sequentially so its floating-point
results are bit-identical to the vectorized implementation's.
"""
import math
from collections import Counter

import numpy as np
import pytest

from tokenlab.analytics import (
    KnnConfig,
    PerformanceRecord,
    feature_matrix,
    knn_classify,
    standardize_apply,
    standardize_fit,
)


def oracle_knn(train_x, train_y, test_x, k, classes):
    rank = {label: i for i, label in enumerate(classes)}
    out = []
    for point in test_x:
        scored = []
        for idx, row in enumerate(train_x):
            acc = 0.0
            for a, b in zip(point, row):
                d = float(a) - float(b)
                acc += d * d
            scored.append((math.sqrt(acc), idx))
        scored.sort(key=lambda pair: (pair[0], pair[1]))
        nearest = scored[:k]
        votes = Counter(train_y[idx] for _d, idx in nearest)
        top = max(votes.values())
        tied = [label for label, v in votes.items() if v == top]
        if len(tied) > 1:
            mean_dist = {
                label: sum(d for d, idx in nearest if train_y[idx] == label) / votes[label]
                for label in tied
            }
            tied.sort(key=lambda label: (mean_dist[label], rank[label]))
        out.append(tied[0])
    return out


def test_zero_distance_neighbour_wins_at_k1():
    train = np.array([[0.0], [5.0], [9.0]])
    labels = ["A", "B", "C"]
    assert knn_classify(train, labels, np.array([[5.0]]), KnnConfig(k=1)) == ["B"]


def test_nearest_distance_arithmetic():
    train = np.array([[-1.0], [0.0], [5.0]])
    labels = ["A", "A", "B"]
    assert knn_classify(train, labels, np.array([[4.9]]), KnnConfig(k=1)) == ["B"]


def test_equidistant_neighbours_are_taken_in_train_order():
    # Four training points all at distance 1; k=3 keeps indices 0, 1, 2.
    train = np.array([[1.0], [1.0], [-1.0], [-1.0]])
    labels = ["A", "A", "B", "B"]
    got = knn_classify(train, labels, np.array([[0.0]]), KnnConfig(k=3))
    assert got == ["A"]  # 2 x A (indices 0, 1) beats 1 x B (index 2)


def test_vote_tie_breaks_on_mean_distance_then_class_order():
    # k=3, three singleton classes: B sits closest on average.
    train = np.array([[1.0], [-0.5], [1.5], [9.0]])
    labels = ["A", "B", "C", "C"]
    got = knn_classify(train, labels, np.array([[0.0]]), KnnConfig(k=3))
    assert got == ["B"]

    # Equal votes and equal mean distances: the class order decides.
    train = np.array([[1.0], [-1.0], [3.0]])
    labels = ["A", "B", "C"]
    got = knn_classify(train, labels, np.array([[0.0]]), KnnConfig(k=3), classes=["B", "A", "C"])
    assert got == ["B"]
    got = knn_classify(train, labels, np.array([[0.0]]), KnnConfig(k=3), classes=["A", "B", "C"])
    assert got == ["A"]


def test_matches_the_oracle_on_randomized_instances():
    rng = np.random.default_rng(404)
    class_pool = ["T1", "T2", "T3", "T4", "T5", "T6", "T7"]
    for case in range(150):
        k = int(rng.choice([1, 3, 5]))
        n_train = int(rng.integers(k, 51))
        n_test = int(rng.integers(1, 9))
        dims = int(rng.integers(1, 4))
        n_classes = int(rng.integers(2, 8))
        classes = class_pool[:n_classes]
        if case % 3 == 0:
            # Integer grids force exact distance ties.
            train_x = rng.integers(-3, 4, size=(n_train, dims)).astype(np.float64)
            test_x = rng.integers(-3, 4, size=(n_test, dims)).astype(np.float64)
        else:
            train_x = rng.normal(size=(n_train, dims))
            test_x = rng.normal(size=(n_test, dims))
        train_y = [classes[i] for i in rng.integers(0, n_classes, size=n_train)]
        got = knn_classify(train_x, train_y, test_x, KnnConfig(k=k), classes=classes)
        want = oracle_knn(train_x, train_y, test_x, k, classes)
        assert got == want, f"case {case}: k={k} dims={dims}"


def test_permutation_equivariance():
    rng = np.random.default_rng(7)
    train_x = rng.normal(size=(30, 2))
    train_y = [["A", "B", "C"][i] for i in rng.integers(0, 3, size=30)]
    test_x = rng.normal(size=(10, 2))
    base = knn_classify(train_x, train_y, test_x, KnnConfig(k=3))
    perm = rng.permutation(10)
    shuffled = knn_classify(train_x, train_y, test_x[perm], KnnConfig(k=3))
    assert shuffled == [base[i] for i in perm]


def test_k_validation():
    train = np.zeros((4, 1))
    labels = ["A"] * 4
    with pytest.raises(ValueError, match="exceeds"):
        knn_classify(train, labels, np.zeros((1, 1)), KnnConfig(k=5))
    with pytest.raises(ValueError, match="odd"):
        KnnConfig(k=4).validate()
    with pytest.raises(ValueError, match="positive"):
        KnnConfig(k=0).validate()


def test_label_and_shape_validation():
    train = np.zeros((3, 1))
    with pytest.raises(ValueError, match="length"):
        knn_classify(train, ["A", "B"], np.zeros((1, 1)), KnnConfig(k=1))
    with pytest.raises(ValueError, match="missing from class list"):
        knn_classify(train, ["A", "B", "X"], np.zeros((1, 1)), KnnConfig(k=1), classes=["A", "B"])


def test_standardize_two_point_symmetry():
    train = np.array([[0.0], [10.0]])
    params = standardize_fit(train)
    z = standardize_apply(train, params)
    assert z.tolist() == [[-1.0], [1.0]]  # population sd convention
    assert standardize_apply(np.array([[5.0]]), params).tolist() == [[0.0]]


def test_standardize_flags_constant_features():
    train = np.array([[1.0, 7.0], [2.0, 7.0], [3.0, 7.0]])
    params = standardize_fit(train)
    assert params.constant.tolist() == [False, True]
    z = standardize_apply(train, params)
    assert np.all(z[:, 1] == 0.0)
    assert not np.any(np.isnan(z))


def test_standardize_uses_train_statistics_only():
    train = np.array([[0.0], [10.0]])
    params = standardize_fit(train)
    test = np.array([[100.0]])
    assert standardize_apply(test, params).tolist() == [[19.0]]  # (100-5)/5


def test_feature_matrix_layout():
    records = [
        PerformanceRecord("r0", "s0", "T1", 12, 0, extra_features={"x": 1.5}),
        PerformanceRecord("r1", "s1", "T2", -3, 0, extra_features={"x": 2.5}),
    ]
    plain = feature_matrix(records)
    assert plain.shape == (2, 1)
    assert plain[:, 0].tolist() == [12.0, -3.0]
    extended = feature_matrix(records, extra_keys=("x",))
    assert extended.shape == (2, 2)
    assert extended[0].tolist() == [12.0, 1.5]
