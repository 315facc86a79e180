"""Tabular reports rendered as Markdown, CSV or JSON.

Every format carries the same values. Floats are rounded half-up to a fixed
number of decimals; the value is first trimmed to 12 significant digits so
binary noise (``1.0625`` stored as ``1.06249999...``) does not flip the
rounding direction.
"""

from __future__ import annotations

import csv
import enum
import io
import json
from dataclasses import dataclass, field
from decimal import ROUND_HALF_UP, Decimal

__all__ = ["ReportFormat", "Report", "format_number", "round_half_up", "render"]


class ReportFormat(str, enum.Enum):
    MARKDOWN = "markdown"
    CSV = "csv"
    JSON = "json"


def _quantize(value: float, decimals: int) -> Decimal:
    exact = Decimal(format(float(value), ".12g"))
    return exact.quantize(Decimal(1).scaleb(-decimals), rounding=ROUND_HALF_UP)


def round_half_up(value: float, decimals: int = 2) -> float:
    """
    >>> round_half_up(86.65, 1)
    86.7
    >>> round_half_up(96.9 / 91.2, 3)
    1.063
    """
    return float(_quantize(value, decimals))


def format_number(value, decimals: int = 2) -> str:
    if value is None:
        return "-"
    if isinstance(value, bool):
        return str(value).lower()
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        q = _quantize(value, decimals)
        return "0" + ("." + "0" * decimals if decimals else "") if q.is_zero() else str(q)
    return str(value)


@dataclass
class Report:
    columns: list
    rows: list
    decimals: int = 2
    notes: list = field(default_factory=list)
    meta: dict = field(default_factory=dict)
    signed: tuple = ()  # integer columns shown with an explicit sign in Markdown


def _json_value(value, decimals):
    if isinstance(value, float):
        return float(_quantize(value, decimals))
    return value


def render(report: Report, fmt) -> str:
    fmt = ReportFormat(fmt)
    d = report.decimals
    if fmt is ReportFormat.JSON:
        payload = {
            "columns": list(report.columns),
            "rows": [{c: _json_value(v, d) for c, v in zip(report.columns, row)}
                     for row in report.rows],
        }
        if report.meta:
            payload["meta"] = {k: _json_value(v, d) for k, v in report.meta.items()}
        if report.notes:
            payload["notes"] = list(report.notes)
        return json.dumps(payload, indent=2, ensure_ascii=False) + "\n"

    if fmt is ReportFormat.CSV:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(report.columns)
        for row in report.rows:
            writer.writerow([format_number(v, d) for v in row])
        return buf.getvalue()

    cells = []
    for row in report.rows:
        text = []
        for col, v in zip(report.columns, row):
            if col in report.signed and isinstance(v, int) and not isinstance(v, bool):
                text.append(f"{v:+d}" if v else "0")
            else:
                text.append(format_number(v, d))
        cells.append(text)
    widths = [max([len(str(c))] + [len(r[i]) for r in cells])
              for i, c in enumerate(report.columns)]
    numeric = [all(_looks_numeric(r[i]) for r in cells) and cells
               for i in range(len(report.columns))]

    def line(values):
        parts = [v.rjust(w) if num else v.ljust(w)
                 for v, w, num in zip(values, widths, numeric)]
        return "| " + " | ".join(parts) + " |"

    out = [line([str(c) for c in report.columns]),
           "|" + "|".join((("-" * (w + 1)) + ":") if num else "-" * (w + 2)
                          for w, num in zip(widths, numeric)) + "|"]
    out += [line(r) for r in cells]
    if report.notes:
        out.append("")
        out += list(report.notes)
    return "\n".join(out) + "\n"


def _looks_numeric(text: str) -> bool:
    if text == "-":
        return True
    try:
        float(text)
    except ValueError:
        return False
    return True
