"""Pacing-diagram data: intensity series and gameplay-category timelines.

Event time (``Beat`` axis) indexes beats along the path; play time (``Time``
axis) lays beats out by expected playtime. On the play-time axis a beat with
playtime p yields ceil(p / timescale) points spaced ``timescale`` seconds
apart from the beat's start, so larger timescales coarsen the curve toward
the beat diagram. The play-time clock runs on an integer microsecond grid,
which keeps every emitted coordinate exact under the 6-decimal export
format.

Everything here is pure: DiagramData values are immutable snapshots, and
hiding a series only edits the hidden set, never the data.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from enum import Enum

from .chart import ExperienceChart, ExperienceSpec, computed_intensity
from .errors import InvalidPath, MissingSpec, UnknownSeries
from .paths import Path, path_is_valid

TIMESCALES = (1, 2, 5, 10, 30, 60, 120, 300)

# Visual duration of a zero-playtime beat on the play-time axis, in seconds.
ZERO_PLAYTIME_EPSILON = 0.1

_US = 1_000_000  # microseconds per second


class DiagramKind(Enum):
    INTENSITY = "intensity"
    CATEGORY = "category"


class IntensitySetting(Enum):
    COMPUTED = "computed"
    GAMEPLAY = "gameplay"
    NARRATIVE = "narrative"
    ALL = "all"


class AxisMode(Enum):
    BEAT = "beat"
    TIME = "time"


@dataclass(frozen=True)
class TimeAxis:
    mode: AxisMode = AxisMode.BEAT
    timescale: int | None = None  # seconds; required in TIME mode

    def __post_init__(self):
        if self.mode is AxisMode.TIME:
            if self.timescale not in TIMESCALES:
                raise ValueError(
                    f"timescale must be one of {TIMESCALES}, got {self.timescale!r}"
                )
        elif self.timescale is not None:
            raise ValueError("timescale only applies to the Time axis mode")


@dataclass(frozen=True)
class IntensitySeries:
    series_id: str
    path_label: str
    setting: str  # computed | gameplay | narrative
    points: tuple[tuple[float, float], ...]


@dataclass(frozen=True)
class CategorySegment:
    category: str
    start: float
    length: float


@dataclass(frozen=True)
class CategoryTimeline:
    timeline_id: str
    path_label: str
    segments: tuple[CategorySegment, ...]


@dataclass(frozen=True)
class DiagramData:
    kind: DiagramKind
    axis: TimeAxis
    series: tuple[IntensitySeries, ...] = ()
    timelines: tuple[CategoryTimeline, ...] = ()
    hidden: frozenset[str] = frozenset()

    def series_ids(self) -> list[str]:
        if self.kind is DiagramKind.INTENSITY:
            return [s.series_id for s in self.series]
        return [t.timeline_id for t in self.timelines]


def _spec_value(spec: ExperienceSpec, setting: str) -> float:
    if setting == "computed":
        return computed_intensity(spec)
    if setting == "gameplay":
        return spec.gameplay_intensity
    if setting == "narrative":
        return spec.narrative_intensity
    raise ValueError(f"unknown intensity setting {setting!r}")


def _check_paths(chart: ExperienceChart, paths: list[Path]) -> None:
    for path in paths:
        if not path_is_valid(chart, path.beats):
            raise InvalidPath(f"path {list(path.beats)!r} is not valid in this chart")


def path_label(index: int) -> str:
    return f"path {index + 1}"


def _beat_durations_us(chart: ExperienceChart, path: Path) -> list[int | None]:
    """Play-time footprint per beat in microseconds; None for spec-less beats."""
    out: list[int | None] = []
    for beat_id in path.beats:
        beat = chart.beat(beat_id)
        if beat.spec is None:
            out.append(None)
            continue
        playtime = chart.spec(beat.spec).expected_playtime
        if playtime <= 0:
            out.append(round(ZERO_PLAYTIME_EPSILON * _US))
        else:
            out.append(max(1, round(playtime * _US)))
    return out


def intensity_diagram(
    chart: ExperienceChart,
    paths: list[Path],
    setting: IntensitySetting = IntensitySetting.COMPUTED,
    axis: TimeAxis = TimeAxis(),
) -> DiagramData:
    """One series per path and per expanded setting; beats without specs are
    skipped (they occupy event time but contribute no point or play time)."""
    _check_paths(chart, paths)
    settings = (
        ("computed", "gameplay", "narrative")
        if setting is IntensitySetting.ALL
        else (setting.value,)
    )
    all_series: list[IntensitySeries] = []
    for p_idx, path in enumerate(paths):
        label = path_label(p_idx)
        for name in settings:
            points: list[tuple[float, float]] = []
            if axis.mode is AxisMode.BEAT:
                for b_idx, beat_id in enumerate(path.beats):
                    beat = chart.beat(beat_id)
                    if beat.spec is None:
                        continue
                    points.append(
                        (float(b_idx), _spec_value(chart.spec(beat.spec), name))
                    )
            else:
                step_us = axis.timescale * _US
                clock_us = 0
                for beat_id, duration_us in zip(
                    path.beats, _beat_durations_us(chart, path)
                ):
                    beat = chart.beat(beat_id)
                    if duration_us is None:
                        continue  # no spec: zero-length on the time axis
                    spec = chart.spec(beat.spec)
                    playtime = spec.expected_playtime
                    count = max(1, math.ceil(playtime / axis.timescale))
                    y = _spec_value(spec, name)
                    for i in range(count):
                        points.append(((clock_us + i * step_us) / _US, y))
                    # off-grid playtimes may round onto the last sample; keep
                    # the next beat's first point strictly after ours
                    clock_us += max(duration_us, (count - 1) * step_us + 1)
            all_series.append(
                IntensitySeries(
                    series_id=f"{label.replace(' ', '')}:{name}",
                    path_label=label,
                    setting=name,
                    points=tuple(points),
                )
            )
    return DiagramData(
        kind=DiagramKind.INTENSITY, axis=axis, series=tuple(all_series)
    )


def category_diagram(
    chart: ExperienceChart, paths: list[Path], axis: TimeAxis = TimeAxis()
) -> DiagramData:
    """One contiguous timeline per path; every beat on the path needs a spec."""
    _check_paths(chart, paths)
    timelines: list[CategoryTimeline] = []
    for p_idx, path in enumerate(paths):
        label = path_label(p_idx)
        segments: list[CategorySegment] = []
        clock_us = 0
        for b_idx, beat_id in enumerate(path.beats):
            beat = chart.beat(beat_id)
            if beat.spec is None:
                raise MissingSpec(beat_id)
            spec = chart.spec(beat.spec)
            if axis.mode is AxisMode.BEAT:
                segments.append(
                    CategorySegment(spec.gameplay_category, float(b_idx), 1.0)
                )
            else:
                playtime = spec.expected_playtime
                length_us = round(
                    (playtime if playtime > 0 else ZERO_PLAYTIME_EPSILON) * _US
                )
                segments.append(
                    CategorySegment(
                        spec.gameplay_category, clock_us / _US, length_us / _US
                    )
                )
                clock_us += length_us
        timelines.append(
            CategoryTimeline(
                timeline_id=label.replace(" ", ""),
                path_label=label,
                segments=tuple(segments),
            )
        )
    return DiagramData(
        kind=DiagramKind.CATEGORY, axis=axis, timelines=tuple(timelines)
    )


def toggle_hidden(diagram: DiagramData, series_id: str) -> DiagramData:
    """Flip a series in or out of the hidden set; the data stays untouched."""
    if series_id not in diagram.series_ids():
        raise UnknownSeries(f"no series {series_id!r} in this diagram")
    hidden = set(diagram.hidden)
    if series_id in hidden:
        hidden.remove(series_id)
    else:
        hidden.add(series_id)
    return replace(diagram, hidden=frozenset(hidden))


def with_hidden(diagram: DiagramData, hidden: set[str] | frozenset[str]) -> DiagramData:
    unknown = set(hidden) - set(diagram.series_ids())
    if unknown:
        raise UnknownSeries(f"no series {sorted(unknown)!r} in this diagram")
    return replace(diagram, hidden=frozenset(hidden))
