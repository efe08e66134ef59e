"""Plain-text rendering of run results.

The cross-table layout mirrors classic statistical console output: a cell
legend, the observation count, then per cell a stack of four numbers
(count, row proportion, column proportion, table proportion) with row and
column totals.
"""
from __future__ import annotations

from .analytics import CohortStat, CrossTable, SuccessSummary
from .tokens import TokenDistinctnessReport

__all__ = [
    "render_crosstable_text",
    "render_distinctness_text",
    "render_summary_text",
    "render_stats_text",
    "render_report_text",
]


def _fmt(p: float) -> str:
    return f"{p:.3f}"


def render_crosstable_text(table: CrossTable) -> str:
    table.check()
    lines = [
        "Cell Contents",
        "",
        "\t\t\tN",
        "N / Row Total\t\t\t",
        "N / Col Total\t\t\t",
        "N / Table Total\t\t\t",
        "",
        f"Total Observations in Table: {table.n}",
        "",
    ]
    header_pad = "\t" * len(table.classes)
    lines.append(f"actual\tpredicted{header_pad}Row Total")
    lines.append("\t" + "\t".join(table.classes) + "\t")

    row_props = table.row_props
    col_props = table.col_props
    table_props = table.table_props
    n = table.n if table.n else 1
    for i, label in enumerate(table.classes):
        counts = "\t".join(str(int(c)) for c in table.counts[i])
        lines.append(f"{label}\t{counts}\t{int(table.row_totals[i])}")
        props = "\t".join(_fmt(p) for p in row_props[i])
        lines.append(f"\t{props}\t{_fmt(table.row_totals[i] / n)}")
        props = "\t".join(_fmt(p) for p in col_props[i])
        lines.append(f"\t{props}\t")
        props = "\t".join(_fmt(p) for p in table_props[i])
        lines.append(f"\t{props}\t")
    totals = "\t".join(str(int(c)) for c in table.col_totals)
    lines.append(f"Column Total\t{totals}\t{table.n}")
    shares = "\t".join(_fmt(c / n) for c in table.col_totals)
    lines.append(f"\t{shares}\t")
    lines.append("")
    return "\n".join(lines)


def render_distinctness_text(report: TokenDistinctnessReport) -> str:
    lines = [
        "Token distinctness",
        f"  item scale: {report.item_scale:g}",
        f"  threshold: {report.threshold:.3f}",
        f"  min off-diagonal distance: {report.min_offdiagonal:.4f}",
        f"  sufficient: {'true' if report.sufficient else 'false'}",
        "",
        "Pairwise distances (fixed-scale encoding space)",
        "\t" + "\t".join(report.token_ids),
    ]
    for i, label in enumerate(report.token_ids):
        row = "\t".join(f"{d:.4f}" for d in report.pairwise_distance[i])
        lines.append(f"{label}\t{row}")
    lines.append("")
    return "\n".join(lines)


def render_summary_text(summaries: dict[str, SuccessSummary]) -> str:
    lines = ["Success summary"]
    for scope in ("all-tokens", "T1:T6"):
        if scope not in summaries:
            continue
        s = summaries[scope]
        lines.append(
            f"  {s.scope}: success {s.success}, missed {s.missed}, "
            f"success rate {s.percent}%"
        )
    lines.append("")
    return "\n".join(lines)


def render_stats_text(stats: list[CohortStat]) -> str:
    lines = ["Cohort net profit", "token\tcount\tmean\tsd"]
    for st in stats:
        sd = f"{st.sd:.1f}" if st.sd is not None else "n/a"
        lines.append(f"{st.label}\t{st.count}\t{st.mean:.1f}\t{sd}")
    lines.append("")
    return "\n".join(lines)


def render_report_text(bundle) -> str:
    """Full run report: distinctness, cohort stats, cross-table, summaries."""
    sections = [
        render_distinctness_text(bundle.distinctness),
        render_stats_text(bundle.stats),
        render_crosstable_text(bundle.classification.table),
        render_summary_text(bundle.classification.summaries),
    ]
    return "\n".join(sections)
