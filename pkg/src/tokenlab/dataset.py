"""Dataset persistence: performance records to and from CSV.

Schema: record_id, subject_id, token_label, net_profit, seed. Loads are
strict so a truncated or hand-edited file fails loudly with the offending
line number instead of silently skewing the analysis.
"""
from __future__ import annotations

import csv
import io
import os

from .analytics.records import PerformanceRecord

__all__ = ["CSV_FIELDS", "DatasetError", "write_records_csv", "read_records_csv", "records_to_csv_text"]

CSV_FIELDS = ("record_id", "subject_id", "token_label", "net_profit", "seed")


class DatasetError(ValueError):
    pass


def records_to_csv_text(records: list[PerformanceRecord]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_FIELDS)
    for r in records:
        writer.writerow([r.record_id, r.subject_id, r.token_label, r.net_profit, r.seed])
    return buf.getvalue()


def write_records_csv(path: str, records: list[PerformanceRecord]) -> None:
    parent = os.path.dirname(path)
    if parent:
        os.makedirs(parent, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(records_to_csv_text(records))


def read_records_csv(path: str) -> list[PerformanceRecord]:
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise DatasetError(f"{path}: empty file, expected a header row") from None
        if tuple(header) != CSV_FIELDS:
            raise DatasetError(
                f"{path}: header {header!r} does not match {list(CSV_FIELDS)!r}"
            )
        records = []
        for line_no, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != len(CSV_FIELDS):
                raise DatasetError(
                    f"{path}:{line_no}: expected {len(CSV_FIELDS)} fields, got {len(row)}"
                )
            record_id, subject_id, token_label, net_profit, seed = row
            try:
                profit = int(net_profit)
                seed_val = int(seed)
            except ValueError as exc:
                raise DatasetError(f"{path}:{line_no}: {exc}") from None
            try:
                records.append(
                    PerformanceRecord(
                        record_id=record_id,
                        subject_id=subject_id,
                        token_label=token_label,
                        net_profit=profit,
                        seed=seed_val,
                    )
                )
            except ValueError as exc:
                raise DatasetError(f"{path}:{line_no}: {exc}") from None
    return records
