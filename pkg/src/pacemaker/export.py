"""Deterministic CSV and SVG serialization of diagram data.

CSV is a data export and includes hidden series; SVG is an export of the
rendered view and honors the hidden set. Identical DiagramData always
yields identical bytes.
"""

from __future__ import annotations

import csv
import io
import re
from xml.sax.saxutils import escape

from .diagrams import (
    CategorySegment,
    CategoryTimeline,
    DiagramData,
    DiagramKind,
    IntensitySeries,
    TimeAxis,
)
from .errors import ParseError

PALETTE = (
    "#4e79a7",
    "#f28e2b",
    "#e15759",
    "#76b7b4",
    "#59a14f",
    "#edc948",
    "#b07aa1",
    "#9c755f",
)

INTENSITY_HEADER = ["path", "series", "x", "y"]
CATEGORY_HEADER = ["path", "segment_index", "category", "start", "length"]


def fmt_num(value: float) -> str:
    """Up to 6 decimal places, trailing zeros stripped, '.' separator."""
    if value == int(value):
        return str(int(value))
    text = f"{value:.6f}".rstrip("0").rstrip(".")
    return text or "0"


def _label_key(label: str) -> tuple:
    # "path 10" must sort after "path 2"
    match = re.fullmatch(r"path (\d+)", label)
    return (0, int(match.group(1))) if match else (1, label)


def to_csv(diagram: DiagramData) -> bytes:
    buffer = io.StringIO()
    buffer.write(f"# kind: {diagram.kind.value}\n")
    writer = csv.writer(buffer, lineterminator="\n")
    if diagram.kind is DiagramKind.INTENSITY:
        writer.writerow(INTENSITY_HEADER)
        ordered = sorted(diagram.series, key=lambda s: (_label_key(s.path_label), s.setting))
        for series in ordered:
            for x, y in series.points:
                writer.writerow([series.path_label, series.setting, fmt_num(x), fmt_num(y)])
    else:
        writer.writerow(CATEGORY_HEADER)
        ordered_t = sorted(diagram.timelines, key=lambda t: _label_key(t.path_label))
        for timeline in ordered_t:
            for index, seg in enumerate(timeline.segments):
                writer.writerow(
                    [
                        timeline.path_label,
                        index,
                        seg.category,
                        fmt_num(seg.start),
                        fmt_num(seg.length),
                    ]
                )
    return buffer.getvalue().encode("utf-8")


def parse_csv(document: bytes) -> DiagramData:
    """Rebuild diagram data from a CSV export (axis defaults, nothing hidden)."""
    try:
        text = document.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise ParseError(f"not UTF-8: {exc}") from None
    lines = text.split("\n")
    if not lines or not lines[0].startswith("# kind: "):
        raise ParseError("missing '# kind:' comment line")
    kind_name = lines[0][len("# kind: ") :].strip()
    try:
        kind = DiagramKind(kind_name)
    except ValueError:
        raise ParseError(f"unknown diagram kind {kind_name!r}") from None
    rows = list(csv.reader(lines[1:]))
    rows = [r for r in rows if r]
    if not rows:
        raise ParseError("missing header row")
    header, rows = rows[0], rows[1:]

    if kind is DiagramKind.INTENSITY:
        if header != INTENSITY_HEADER:
            raise ParseError(f"bad intensity header {header!r}")
        grouped: dict[tuple[str, str], list[tuple[float, float]]] = {}
        order: list[tuple[str, str]] = []
        for row in rows:
            if len(row) != 4:
                raise ParseError(f"bad intensity row {row!r}")
            key = (row[0], row[1])
            if key not in grouped:
                grouped[key] = []
                order.append(key)
            try:
                grouped[key].append((float(row[2]), float(row[3])))
            except ValueError:
                raise ParseError(f"bad number in row {row!r}") from None
        series = tuple(
            IntensitySeries(
                series_id=f"{label.replace(' ', '')}:{setting}",
                path_label=label,
                setting=setting,
                points=tuple(points),
            )
            for (label, setting), points in ((k, grouped[k]) for k in order)
        )
        return DiagramData(kind=kind, axis=TimeAxis(), series=series)

    if header != CATEGORY_HEADER:
        raise ParseError(f"bad category header {header!r}")
    by_label: dict[str, list[CategorySegment]] = {}
    label_order: list[str] = []
    for row in rows:
        if len(row) != 5:
            raise ParseError(f"bad category row {row!r}")
        label = row[0]
        if label not in by_label:
            by_label[label] = []
            label_order.append(label)
        try:
            by_label[label].append(
                CategorySegment(category=row[2], start=float(row[3]), length=float(row[4]))
            )
        except ValueError:
            raise ParseError(f"bad number in row {row!r}") from None
    timelines = tuple(
        CategoryTimeline(
            timeline_id=label.replace(" ", ""),
            path_label=label,
            segments=tuple(by_label[label]),
        )
        for label in label_order
    )
    return DiagramData(kind=kind, axis=TimeAxis(), timelines=timelines)


# -- SVG -----------------------------------------------------------------

_VIEW_W, _VIEW_H = 960, 540
_PLOT = (60.0, 30.0, 770.0, 480.0)  # x0, y0, x1, y1


def _px(value: float) -> str:
    return fmt_num(round(value, 2))


def _x_scale(xmin: float, xmax: float):
    x0, _, x1, _ = _PLOT
    span = (xmax - xmin) or 1.0

    def to_px(x: float) -> float:
        return x0 + (x - xmin) / span * (x1 - x0)

    return to_px


def _ticks(xmin: float, xmax: float, count: int = 6) -> list[float]:
    if xmax <= xmin:
        return [xmin]
    step = (xmax - xmin) / (count - 1)
    return [xmin + i * step for i in range(count)]


def to_svg(diagram: DiagramData) -> bytes:
    parts: list[str] = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {_VIEW_W} {_VIEW_H}" '
        'font-family="sans-serif" font-size="12">',
        f'<rect x="0" y="0" width="{_VIEW_W}" height="{_VIEW_H}" fill="white"/>',
    ]
    x0, y0, x1, y1 = _PLOT
    parts.append(
        f'<line x1="{_px(x0)}" y1="{_px(y1)}" x2="{_px(x1)}" y2="{_px(y1)}" stroke="#333"/>'
    )
    parts.append(
        f'<line x1="{_px(x0)}" y1="{_px(y0)}" x2="{_px(x0)}" y2="{_px(y1)}" stroke="#333"/>'
    )

    if diagram.kind is DiagramKind.INTENSITY:
        _render_intensity(diagram, parts)
    else:
        _render_category(diagram, parts)

    parts.append("</svg>")
    return ("\n".join(parts) + "\n").encode("utf-8")


def _axis_label(diagram: DiagramData) -> str:
    return "beat" if diagram.axis.mode.value == "beat" else "seconds"


def _render_intensity(diagram: DiagramData, parts: list[str]) -> None:
    x0, y0, x1, y1 = _PLOT
    visible = [s for s in diagram.series if s.series_id not in diagram.hidden]
    xs = [x for s in visible for x, _ in s.points]
    xmin, xmax = (min(xs), max(xs)) if xs else (0.0, 1.0)
    if xmax == xmin:
        xmax = xmin + 1.0
    to_px = _x_scale(xmin, xmax)

    def y_px(y: float) -> float:
        return y1 - (y / 100.0) * (y1 - y0)

    for tick in _ticks(xmin, xmax):
        tx = to_px(tick)
        parts.append(
            f'<line x1="{_px(tx)}" y1="{_px(y1)}" x2="{_px(tx)}" y2="{_px(y1 + 5)}" stroke="#333"/>'
        )
        parts.append(
            f'<text x="{_px(tx)}" y="{_px(y1 + 20)}" text-anchor="middle">{escape(fmt_num(round(tick, 2)))}</text>'
        )
    for tick in range(0, 101, 20):
        ty = y_px(tick)
        parts.append(
            f'<line x1="{_px(x0 - 5)}" y1="{_px(ty)}" x2="{_px(x0)}" y2="{_px(ty)}" stroke="#333"/>'
        )
        parts.append(
            f'<text x="{_px(x0 - 8)}" y="{_px(ty + 4)}" text-anchor="end">{tick}</text>'
        )
    parts.append(
        f'<text x="{_px((x0 + x1) / 2)}" y="{_px(y1 + 38)}" text-anchor="middle">'
        f"{escape(_axis_label(diagram))}</text>"
    )

    legend_y = y0 + 10
    for index, series in enumerate(diagram.series):
        if series.series_id in diagram.hidden:
            continue
        color = PALETTE[index % len(PALETTE)]
        coords = " ".join(f"{_px(to_px(x))},{_px(y_px(y))}" for x, y in series.points)
        parts.append(
            f'<polyline points="{coords}" fill="none" stroke="{color}" stroke-width="1.5"/>'
        )
        parts.append(
            f'<line x1="{_px(x1 + 15)}" y1="{_px(legend_y)}" x2="{_px(x1 + 35)}" '
            f'y2="{_px(legend_y)}" stroke="{color}" stroke-width="2"/>'
        )
        parts.append(
            f'<text x="{_px(x1 + 40)}" y="{_px(legend_y + 4)}">'
            f"{escape(series.path_label)} {escape(series.setting)}</text>"
        )
        legend_y += 18


def _render_category(diagram: DiagramData, parts: list[str]) -> None:
    x0, y0, x1, y1 = _PLOT
    visible = [t for t in diagram.timelines if t.timeline_id not in diagram.hidden]
    ends = [seg.start + seg.length for t in visible for seg in t.segments]
    xmax = max(ends) if ends else 1.0
    to_px = _x_scale(0.0, xmax)
    categories = sorted({seg.category for t in visible for seg in t.segments})
    color_of = {c: PALETTE[i % len(PALETTE)] for i, c in enumerate(categories)}

    rows = max(len(visible), 1)
    band = (y1 - y0) / rows
    bar = band * 0.6
    for row, timeline in enumerate(visible):
        top = y0 + row * band + (band - bar) / 2
        parts.append(
            f'<text x="{_px(x0 - 8)}" y="{_px(top + bar / 2 + 4)}" text-anchor="end">'
            f"{escape(timeline.path_label)}</text>"
        )
        for seg in timeline.segments:
            left = to_px(seg.start)
            width = to_px(seg.start + seg.length) - left
            parts.append(
                f'<rect x="{_px(left)}" y="{_px(top)}" width="{_px(width)}" '
                f'height="{_px(bar)}" fill="{color_of[seg.category]}" '
                f'stroke="white" stroke-width="0.5">'
                f"<title>{escape(seg.category)}</title></rect>"
            )
    for tick in _ticks(0.0, xmax):
        tx = to_px(tick)
        parts.append(
            f'<line x1="{_px(tx)}" y1="{_px(y1)}" x2="{_px(tx)}" y2="{_px(y1 + 5)}" stroke="#333"/>'
        )
        parts.append(
            f'<text x="{_px(tx)}" y="{_px(y1 + 20)}" text-anchor="middle">{escape(fmt_num(round(tick, 2)))}</text>'
        )
    parts.append(
        f'<text x="{_px((x0 + x1) / 2)}" y="{_px(y1 + 38)}" text-anchor="middle">'
        f"{escape(_axis_label(diagram))}</text>"
    )
    legend_y = y0 + 10
    for category in categories:
        parts.append(
            f'<rect x="{_px(x1 + 15)}" y="{_px(legend_y - 8)}" width="12" height="12" '
            f'fill="{color_of[category]}"/>'
        )
        parts.append(
            f'<text x="{_px(x1 + 32)}" y="{_px(legend_y + 2)}">{escape(category)}</text>'
        )
        legend_y += 18


__all__ = ["PALETTE", "fmt_num", "to_csv", "parse_csv", "to_svg"]
