"""Acceptance sweep: one test per shipped guarantee.

Each test times its own body against a wall-clock budget and prints one
PASS/FAIL line (visible under `pytest -s`), then asserts. The reference
cross-table and its summary figures live in test_crosstab.py; everything
else here is generated fresh inside the timed window.
"""
import math
import time
from collections import Counter, defaultdict
from dataclasses import replace

import numpy as np

from tokenlab.analytics import (
    KnnConfig,
    PerformanceRecord,
    TOKEN_LABELS,
    cross_table,
    feature_matrix,
    knn_classify,
    standardize_apply,
    standardize_fit,
    success_summary,
)
from tokenlab.config import default_config
from tokenlab.experiment import classify_records, generate_records, run_experiment
from tokenlab.market.book import BUY, LIMIT, MARKET, SELL, Order, OrderBook
from tokenlab.market.fundamental import DRIFT_RANGE, generate_fundamental
from tokenlab.market.session import replay_order_log
from tokenlab.report import render_crosstable_text

from test_crosstab import CLASSES, reference_pairs


def _report(name: str, ok: bool, detail: str, elapsed: float, limit: float) -> None:
    timely = elapsed < limit
    status = "PASS" if (ok and timely) else "FAIL"
    print(f"[{status}] {name}: {detail} [{elapsed:.2f}s / budget {limit:.0f}s]")
    assert ok, f"{name}: {detail}"
    assert timely, f"{name}: took {elapsed:.2f}s, budget {limit}s"


def test_reference_summary_arithmetic():
    t0 = time.perf_counter()
    actual, predicted = reference_pairs()
    table = cross_table(actual, predicted, CLASSES)
    overall = success_summary(table, "all-tokens")
    informative = success_summary(table, "T1:T6")
    got = (
        overall.success, overall.missed, overall.percent,
        informative.success, informative.missed, informative.percent,
    )
    ok = got == (57, 7, 89, 47, 3, 94)
    _report(
        "summary-arithmetic",
        ok,
        f"all-tokens {got[0]}/{got[1]}/{got[2]}%, T1:T6 {got[3]}/{got[4]}/{got[5]}%",
        time.perf_counter() - t0,
        1.0,
    )


def test_reference_table_rendering():
    t0 = time.perf_counter()
    actual, predicted = reference_pairs()
    text = render_crosstable_text(cross_table(actual, predicted, CLASSES))
    lines = text.splitlines()
    start = next(i for i, l in enumerate(lines) if l.split("\t")[0] == "T3")
    stack = [lines[start + k].split("\t")[3] for k in range(4)]
    ok = (
        "Total Observations in Table: 64" in text
        and stack == ["6", "0.857", "1.000", "0.094"]
    )
    _report(
        "table-rendering",
        ok,
        f"count line present, T3 cell stack {'/'.join(stack)}",
        time.perf_counter() - t0,
        1.0,
    )


def _oracle_predict(train_x, train_y, test_row, k, classes):
    """Brute-force nearest neighbours, written independently of the
    library: sequential square sums, (distance, index) sort, majority
    vote, mean-distance then class-order tie-breaks."""
    dists = []
    for idx in range(len(train_x)):
        s = 0.0
        for a, b in zip(test_row, train_x[idx]):
            d = a - b
            s += d * d
        dists.append((math.sqrt(s), idx))
    dists.sort()
    chosen = dists[:k]
    votes = Counter(train_y[i] for _, i in chosen)
    best = max(votes.values())
    tied = [c for c in votes if votes[c] == best]
    if len(tied) == 1:
        return tied[0]
    sums = {c: 0.0 for c in tied}
    for d, i in chosen:
        if train_y[i] in sums:
            sums[train_y[i]] += d
    rank = {c: i for i, c in enumerate(classes)}
    tied.sort(key=lambda c: (sums[c] / votes[c], rank[c]))
    return tied[0]


def test_knn_matches_oracle():
    t0 = time.perf_counter()
    rng = np.random.default_rng(20260818)
    mismatches = 0
    cases = 1000
    for case in range(cases):
        dims = int(rng.integers(1, 4))
        k = int(rng.choice([1, 3, 5]))
        n_train = int(rng.integers(k, 51))
        n_test = int(rng.integers(1, 9))
        n_classes = int(rng.integers(2, 8))
        classes = [f"T{c + 1}" for c in range(n_classes)]
        if case % 4 == 0:
            classes = list(rng.permutation(classes))
        if case % 3 == 0:
            # Integer grids force exact distance ties.
            train_x = rng.integers(-4, 5, size=(n_train, dims)).astype(np.float64)
            test_x = rng.integers(-4, 5, size=(n_test, dims)).astype(np.float64)
        else:
            train_x = rng.normal(size=(n_train, dims))
            test_x = rng.normal(size=(n_test, dims))
        train_y = [classes[int(i)] for i in rng.integers(0, n_classes, n_train)]
        predicted = knn_classify(train_x, train_y, test_x, KnnConfig(k=k), classes=classes)
        expected = [
            _oracle_predict(train_x.tolist(), train_y, row, k, classes)
            for row in test_x.tolist()
        ]
        if predicted != expected:
            mismatches += 1
    _report(
        "knn-oracle",
        mismatches == 0,
        f"{cases - mismatches}/{cases} randomized instances agree",
        time.perf_counter() - t0,
        10.0,
    )


def _predict_records(train, test):
    params = standardize_fit(feature_matrix(train))
    return knn_classify(
        standardize_apply(feature_matrix(train), params),
        [r.token_label for r in train],
        standardize_apply(feature_matrix(test), params),
        KnnConfig(k=5),
        classes=list(TOKEN_LABELS),
    )


def test_affine_invariance():
    t0 = time.perf_counter()
    rng = np.random.default_rng(11)
    bad = 0
    datasets = 100
    for case in range(datasets):
        n = int(rng.integers(25, 70))
        labels = [TOKEN_LABELS[int(i)] for i in rng.integers(0, 7, n)]
        if case % 2:
            profits = rng.integers(-20000, 20001, n)
        else:
            pool = rng.integers(-300, 301, 12)
            profits = pool[rng.integers(0, len(pool), n)]
        records = [
            PerformanceRecord(f"r{i}", f"s{i}", labels[i], int(profits[i]), i)
            for i in range(n)
        ]
        n_train = max(5, int(0.7 * n))
        train, test = records[:n_train], records[n_train:]
        a = float(rng.uniform(0.5, 3.0))
        b = float(rng.uniform(-5000.0, 5000.0))
        scaled = [replace(r, net_profit=a * r.net_profit + b) for r in records]
        if _predict_records(train, test) != _predict_records(
            scaled[:n_train], scaled[n_train:]
        ):
            bad += 1
    _report(
        "affine-invariance",
        bad == 0,
        f"{datasets - bad}/{datasets} datasets keep identical predictions under a*x+b",
        time.perf_counter() - t0,
        5.0,
    )


def test_default_separability():
    t0 = time.perf_counter()
    base = default_config()
    informed = []
    for seed in range(1, 21):
        cfg = replace(base, master_seed=seed)
        informed.append(classify_records(generate_records(cfg), cfg).accuracy)
    informed_mean = sum(informed) / len(informed)

    flat_behavior = replace(base.behavior, separation=0.0)
    flat = []
    for seed in range(101, 151):
        cfg = replace(base, master_seed=seed, behavior=flat_behavior)
        flat.append(classify_records(generate_records(cfg), cfg).accuracy)
    flat_mean = sum(flat) / len(flat)

    chance = 1.0 / 7.0
    ok = informed_mean >= 0.80 and chance - 0.15 <= flat_mean <= chance + 0.15
    _report(
        "separability",
        ok,
        f"mean accuracy {informed_mean:.3f} over 20 seeds; "
        f"{flat_mean:.3f} at zero separation over 50 seeds (chance {chance:.3f})",
        time.perf_counter() - t0,
        120.0,
    )


def test_default_dataset_shape():
    t0 = time.perf_counter()
    cfg = default_config()
    records = generate_records(cfg)
    counts = Counter(r.token_label for r in records)
    per_token = tuple(counts[label] for label in TOKEN_LABELS)
    result = classify_records(records, cfg)
    t7_train = sum(1 for r in result.train if r.token_label == "T7")
    t7_test = sum(1 for r in result.test if r.token_label == "T7")
    ok = (
        len(records) == 223
        and per_token == (30, 35, 31, 30, 30, 34, 33)
        and (len(result.train), len(result.test)) == (159, 64)
        and (t7_train, t7_test) == (19, 14)
    )
    _report(
        "dataset-shape",
        ok,
        f"{len(records)} records {per_token}, split {len(result.train)}/"
        f"{len(result.test)}, T7 {t7_train}/{t7_test}",
        time.perf_counter() - t0,
        30.0,
    )


def test_market_conservation():
    t0 = time.perf_counter()
    rng = np.random.default_rng(99)
    n = 100_000
    buy_mask = rng.random(n) < 0.5
    market_mask = rng.random(n) < 0.10
    prices = (1000 + rng.integers(-25, 26, n)).tolist()
    quantities = rng.integers(1, 21, n).tolist()
    owners = rng.integers(0, 7, n).tolist()

    book = OrderBook()
    orders: list[Order] = []
    trades = []
    balances: dict[str, list[int]] = defaultdict(lambda: [0, 0])
    crossed = 0
    for i in range(n):
        side = BUY if buy_mask[i] else SELL
        kind = MARKET if market_mask[i] else LIMIT
        owner = f"b{owners[i]}" if side == BUY else f"s{owners[i]}"
        price = None if kind == MARKET else prices[i]
        order = Order(i, owner, side, kind, price, quantities[i], i)
        orders.append(order)
        for t in book.submit(order).fills:
            assert t.buyer_id != t.seller_id
            assert t.quantity > 0 and t.price > 0
            balances[t.buyer_id][0] -= t.price * t.quantity
            balances[t.buyer_id][1] += t.quantity
            balances[t.seller_id][0] += t.price * t.quantity
            balances[t.seller_id][1] -= t.quantity
            trades.append(t)
        bb, ba = book.best_bid(), book.best_ask()
        if bb is not None and ba is not None and bb >= ba:
            crossed += 1
        if i % 2000 == 1999:
            book.assert_sane()

    cash_sum = sum(v[0] for v in balances.values())
    inv_sum = sum(v[1] for v in balances.values())
    replay_trades, replay_accounts = replay_order_log(orders)
    replay_ok = replay_trades == trades and all(
        (replay_accounts[o].cash, replay_accounts[o].inventory) == tuple(v)
        for o, v in balances.items()
    )
    ok = (
        crossed == 0
        and cash_sum == 0
        and inv_sum == 0
        and len(trades) > 10_000
        and replay_ok
    )
    _report(
        "conservation",
        ok,
        f"{n} orders, {len(trades)} trades, cash sum {cash_sum}, "
        f"inventory sum {inv_sum}, crossed events {crossed}, replay exact: {replay_ok}",
        time.perf_counter() - t0,
        30.0,
    )


def test_rerun_determinism(tmp_path):
    t0 = time.perf_counter()
    cfg = replace(default_config(), out_dir=str(tmp_path / "run"))
    first = run_experiment(cfg)
    tracked = [first.dataset_path, first.report_path, first.manifest_path]
    before = {p: open(p, "rb").read() for p in tracked}
    run_experiment(cfg)
    after = {p: open(p, "rb").read() for p in tracked}
    ok = before == after
    _report(
        "determinism",
        ok,
        "dataset, report and manifest byte-identical across reruns",
        time.perf_counter() - t0,
        60.0,
    )


def test_fundamental_drift_bound():
    t0 = time.perf_counter()
    rng = np.random.default_rng(5)
    targets = rng.uniform(DRIFT_RANGE[0], DRIFT_RANGE[1], 1000)
    worst = 0.0
    for i, target in enumerate(targets.tolist()):
        path = generate_fundamental(
            seed=1000 + i, steps=390, drift_target=target, volatility=0.01
        )
        path.check(0.005)
        assert DRIFT_RANGE[0] <= path.drift_target <= DRIFT_RANGE[1]
        worst = max(worst, abs(path.terminal_return - path.drift_target))
    _report(
        "drift-bound",
        worst <= 0.005,
        f"1000 paths, worst terminal-return miss {worst:.5f} (bound 0.005)",
        time.perf_counter() - t0,
        5.0,
    )
