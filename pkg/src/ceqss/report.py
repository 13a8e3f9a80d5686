"""Rendering experiment reports as json, csv, or a comparison table."""

from __future__ import annotations

import csv
import io
import json
from typing import Sequence

from .harness import DETECTION, RECONSTRUCTION, ExperimentReport

FORMATS = ("json", "csv", "table")
CSV_COLUMNS = ("metric", "count", "trials", "rate", "wilson_low", "wilson_high")

_SECURITY = {"ghz": "Unconditional", "cd": "Post-Quantum", "threshold": "Post-Quantum"}
_LABEL = {"ghz": "GHZ-like state", "cd": "Certified deletion", "threshold": "Threshold (t,n)"}


def to_json(report: ExperimentReport, timing: bool = False) -> str:
    return json.dumps(report.to_dict(timing=timing), indent=2) + "\n"


def to_csv(report: ExperimentReport) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for name, m in report.metrics.items():
        writer.writerow([name, m.count, m.trials, repr(m.rate), repr(m.wilson_low), repr(m.wilson_high)])
    return buf.getvalue()


def _cell(report: ExperimentReport, metric: str) -> str:
    m = report.metrics.get(metric)
    if m is None:
        return "n/a"
    return f"{100 * m.rate:.2f}% [{100 * m.wilson_low:.2f}, {100 * m.wilson_high:.2f}]"


def to_table(reports: Sequence[ExperimentReport], reference_row: bool = True) -> str:
    """Side-by-side table: security model, reconstruction and cheat-detection rates."""
    header = ("Scheme", "Security", "Reconstruction probability", "Cheat detecting probability")
    rows = []
    if reference_row:
        rows.append(("Seal bound (reference)", "Unconditional", "100%", "50%"))
    for r in reports:
        scheme = r.config.get("scheme", "?")
        rows.append((_LABEL.get(scheme, scheme), _SECURITY.get(scheme, "?"),
                     _cell(r, RECONSTRUCTION), _cell(r, DETECTION)))
    widths = [max(len(row[i]) for row in [header, *rows]) for i in range(len(header))]
    line = lambda row: " | ".join(c.ljust(w) for c, w in zip(row, widths)).rstrip()
    sep = "-+-".join("-" * w for w in widths)
    return "\n".join([line(header), sep, *map(line, rows)]) + "\n"


def emit_report(report: ExperimentReport, fmt: str = "json", timing: bool = False) -> bytes:
    if fmt == "json":
        text = to_json(report, timing)
    elif fmt == "csv":
        text = to_csv(report)
    elif fmt == "table":
        text = to_table([report])
    else:
        raise ValueError(f"unknown format {fmt!r}; expected one of {FORMATS}")
    return text.encode()
