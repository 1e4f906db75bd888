"""Row records and their CSV, JSON and SVG renderings."""
from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass
from xml.sax.saxutils import escape

from .barriers import BarrierResult

CSV_COLUMNS = ("id", "p", "kappa", "barrier", "theta1", "theta2", "theta3", "rank_mode", "clamped")


@dataclass(frozen=True)
class ReportRow:
    id: str
    p: float | None
    kappa: float
    barrier: float
    theta: tuple[float, float, float]
    rank_mode: str
    clamped: bool
    error: str | None = None

    @classmethod
    def from_result(cls, tensor_id: str, result: BarrierResult, p: float | None = None) -> "ReportRow":
        return cls(tensor_id, result.p if p is None else p, result.kappa, result.value,
                   tuple(result.theta_star), result.rank_mode, result.clamped)

    @classmethod
    def failed(cls, tensor_id: str, p: float | None, kappa: float, rank_mode: str, error: str):
        return cls(tensor_id, p, kappa, math.nan, (math.nan,) * 3, rank_mode, False, error)

    def cells(self, decimals: int) -> list[str]:
        def num(x):
            if x is None:
                return ""
            if isinstance(x, float) and math.isnan(x):
                return "nan"
            return f"{x:.{decimals}f}"

        return [self.id, num(self.p), num(self.kappa), num(self.barrier),
                *(num(t) for t in self.theta), self.rank_mode, "1" if self.clamped else "0"]


def to_csv(rows: list[ReportRow], decimals: int = 6) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for row in rows:
        writer.writerow(row.cells(decimals))
    return buf.getvalue()


def to_json(rows: list[ReportRow], decimals: int = 6) -> str:
    records = []
    for row in rows:
        cells = row.cells(decimals)
        rec = dict(zip(CSV_COLUMNS, cells))
        for key in ("p", "kappa", "barrier", "theta1", "theta2", "theta3"):
            rec[key] = None if rec[key] in ("", "nan") else float(rec[key])
        rec["clamped"] = row.clamped
        if row.error:
            rec["error"] = row.error
        records.append(rec)
    return json.dumps(records, indent=2) + "\n"


def to_svg(points: list[tuple[float, float]], x_label: str = "p", y_label: str = "barrier",
           title: str = "", width: int = 480, height: int = 320) -> str:
    """Self-contained line chart with axes and tick labels."""
    pts = [(x, y) for x, y in points if math.isfinite(x) and math.isfinite(y)]
    if not pts:
        raise ValueError("nothing to plot")
    left, right, top, bottom = 60, 20, 30, 45
    xs, ys = [x for x, _ in pts], [y for _, y in pts]
    x0, x1 = min(xs), max(xs)
    y0, y1 = min(ys), max(ys)
    if x1 == x0:
        x0, x1 = x0 - 0.5, x1 + 0.5
    if y1 == y0:
        y0, y1 = y0 - 0.5, y1 + 0.5
    pad = 0.05 * (y1 - y0)
    y0, y1 = y0 - pad, y1 + pad
    pw, ph = width - left - right, height - top - bottom

    def sx(x):
        return left + (x - x0) / (x1 - x0) * pw

    def sy(y):
        return top + (1.0 - (y - y0) / (y1 - y0)) * ph

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}" font-family="sans-serif" font-size="11">',
        f'<rect width="{width}" height="{height}" fill="white"/>',
        f'<line x1="{left}" y1="{top + ph}" x2="{left + pw}" y2="{top + ph}" stroke="black"/>',
        f'<line x1="{left}" y1="{top}" x2="{left}" y2="{top + ph}" stroke="black"/>',
    ]
    for i in range(5):
        xv = x0 + i * (x1 - x0) / 4
        yv = y0 + i * (y1 - y0) / 4
        out.append(f'<line x1="{sx(xv):.2f}" y1="{top + ph}" x2="{sx(xv):.2f}" y2="{top + ph + 4}" stroke="black"/>')
        out.append(f'<text x="{sx(xv):.2f}" y="{top + ph + 16}" text-anchor="middle">{xv:.3g}</text>')
        out.append(f'<line x1="{left - 4}" y1="{sy(yv):.2f}" x2="{left}" y2="{sy(yv):.2f}" stroke="black"/>')
        out.append(f'<text x="{left - 6}" y="{sy(yv) + 4:.2f}" text-anchor="end">{yv:.4g}</text>')
    poly = " ".join(f"{sx(x):.2f},{sy(y):.2f}" for x, y in pts)
    out.append(f'<polyline points="{poly}" fill="none" stroke="#d4a017" stroke-width="2"/>')
    for x, y in pts:
        out.append(f'<circle cx="{sx(x):.2f}" cy="{sy(y):.2f}" r="2.5" fill="#d4a017"/>')
    out.append(f'<text x="{left + pw / 2}" y="{height - 8}" text-anchor="middle">{escape(x_label)}</text>')
    out.append(f'<text x="14" y="{top + ph / 2}" text-anchor="middle" '
               f'transform="rotate(-90 14 {top + ph / 2})">{escape(y_label)}</text>')
    if title:
        out.append(f'<text x="{left + pw / 2}" y="18" text-anchor="middle">{escape(title)}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
