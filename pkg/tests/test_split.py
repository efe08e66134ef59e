"""Train/test partitioning in both modes."""
import pytest

from tokenlab.analytics import PerformanceRecord, SplitSpec, split
from tokenlab.config import DEFAULT_FIXED_COUNTS


def _records(n, label="T1"):
    return [
        PerformanceRecord(
            record_id=f"{label}-{i:03d}",
            subject_id=f"{label}-s{i:03d}",
            token_label=label,
            net_profit=i,
            seed=i,
        )
        for i in range(n)
    ]


def test_pooled_random_floor_arithmetic():
    train, test = split(_records(10), SplitSpec(mode="pooled-random", ratio=0.7, seed=0))
    assert len(train) == 7
    assert len(test) == 3


def test_partition_is_disjoint_and_exhaustive():
    records = _records(23)
    train, test = split(records, SplitSpec(mode="pooled-random", ratio=0.7, seed=1))
    ids = {r.record_id for r in records}
    assert {r.record_id for r in train} | {r.record_id for r in test} == ids
    assert not ({r.record_id for r in train} & {r.record_id for r in test})


def test_split_preserves_record_order_within_parts():
    records = _records(20)
    train, test = split(records, SplitSpec(mode="pooled-random", ratio=0.5, seed=3))
    order = {r.record_id: i for i, r in enumerate(records)}
    assert [order[r.record_id] for r in train] == sorted(order[r.record_id] for r in train)
    assert [order[r.record_id] for r in test] == sorted(order[r.record_id] for r in test)


def test_same_spec_gives_the_same_partition():
    records = _records(50)
    spec = SplitSpec(mode="pooled-random", ratio=0.7, seed=11)
    a = split(records, spec)
    b = split(records, spec)
    assert a == b
    c = split(records, SplitSpec(mode="pooled-random", ratio=0.7, seed=12))
    assert a != c


def test_fixed_counts_reproduce_the_shipped_table(default_records):
    spec = SplitSpec(mode="fixed-counts", fixed_counts=dict(DEFAULT_FIXED_COUNTS), seed=0)
    train, test = split(default_records, spec)
    assert len(train) == 159
    assert len(test) == 64
    for label, (n_train, n_test) in DEFAULT_FIXED_COUNTS.items():
        assert sum(r.token_label == label for r in train) == n_train, label
        assert sum(r.token_label == label for r in test) == n_test, label
    assert sum(r.token_label == "T7" for r in train) == 19
    assert sum(r.token_label == "T7" for r in test) == 14


def test_fixed_counts_mismatch_names_the_token():
    records = _records(5, "T1") + _records(4, "T2")
    spec = SplitSpec(
        mode="fixed-counts", fixed_counts={"T1": (3, 2), "T2": (3, 2)}, seed=0
    )
    with pytest.raises(ValueError, match="T2"):
        split(records, spec)


def test_labels_missing_from_the_fixed_table_are_an_error():
    records = _records(5, "T1") + _records(4, "T3")
    spec = SplitSpec(mode="fixed-counts", fixed_counts={"T1": (3, 2)}, seed=0)
    with pytest.raises(ValueError, match="T3"):
        split(records, spec)


def test_empty_input_is_an_error():
    with pytest.raises(ValueError):
        split([], SplitSpec())


def test_spec_validation():
    with pytest.raises(ValueError):
        SplitSpec(mode="holdout").validate()
    with pytest.raises(ValueError):
        SplitSpec(mode="pooled-random", ratio=0.0).validate()
    with pytest.raises(ValueError):
        SplitSpec(mode="pooled-random", ratio=1.0).validate()
    with pytest.raises(ValueError):
        SplitSpec(mode="fixed-counts", fixed_counts=None).validate()
    SplitSpec(mode="fixed-counts", fixed_counts={"T1": (1, 1)}).validate()
