"""Path selection over an experience chart.

Shortest paths use Dijkstra with a deterministic tie-break: among
equal-weight paths the lexicographically smallest beat-id sequence wins.
Weights are either 1 per edge (hop count) or the expected playtime of the
edge's target beat, so a playtime-weighted total approximates time spent
after leaving the start beat.
"""

from __future__ import annotations

import heapq
import uuid
from dataclasses import dataclass
from datetime import datetime, timezone
from enum import Enum

from .chart import ExperienceChart
from .errors import InvalidPath


class WeightMode(Enum):
    HOP_COUNT = "hop"
    EXPECTED_PLAYTIME = "time"


@dataclass(frozen=True)
class Path:
    beats: tuple[str, ...]
    total_weight: float


@dataclass(frozen=True)
class PathQuery:
    start: str
    end: str
    via: tuple[str, ...] = ()
    weight_mode: WeightMode = WeightMode.HOP_COUNT


@dataclass(frozen=True)
class PathSnapshot:
    """Frozen copy of a selected path; survives chart edits (possibly stale)."""

    id: str
    label: str
    path: Path
    created_at: str  # ISO-8601 UTC


@dataclass(frozen=True)
class RouteEnumeration:
    paths: tuple[Path, ...]
    truncated: bool


def edge_weight(chart: ExperienceChart, target: str, mode: WeightMode) -> float:
    if mode is WeightMode.HOP_COUNT:
        return 1.0
    beat = chart.beat(target)
    if beat.spec is None:
        return 0.0
    return chart.spec(beat.spec).expected_playtime


def path_is_valid(chart: ExperienceChart, beats: tuple[str, ...] | list[str]) -> bool:
    """True iff every beat exists and every consecutive pair is an edge."""
    if len(beats) < 1:
        return False
    if any(b not in chart.beats for b in beats):
        return False
    return all(chart.has_edge(a, b) for a, b in zip(beats, beats[1:]))


def path_weight(
    chart: ExperienceChart, beats: tuple[str, ...] | list[str], mode: WeightMode
) -> float:
    return sum(edge_weight(chart, b, mode) for b in beats[1:])


def shortest_path(
    chart: ExperienceChart,
    start: str,
    end: str,
    mode: WeightMode = WeightMode.HOP_COUNT,
) -> Path | None:
    chart.beat(start)
    chart.beat(end)
    if start == end:
        return Path(beats=(start,), total_weight=0.0)

    # Heap entries are (weight, beat sequence); tuple comparison gives the
    # lexicographic tie-break for free. best[] prunes dominated entries.
    best: dict[str, tuple[float, tuple[str, ...]]] = {start: (0.0, (start,))}
    done: set[str] = set()
    heap: list[tuple[float, tuple[str, ...]]] = [(0.0, (start,))]
    while heap:
        weight, seq = heapq.heappop(heap)
        node = seq[-1]
        if node in done or (weight, seq) != best.get(node):
            continue
        if node == end:
            return Path(beats=seq, total_weight=weight)
        done.add(node)
        for nxt in chart.successors(node):
            if nxt in done:
                continue
            cand = (weight + edge_weight(chart, nxt, mode), seq + (nxt,))
            if nxt not in best or cand < best[nxt]:
                best[nxt] = cand
                heapq.heappush(heap, cand)
    return None


def waypoint_path(chart: ExperienceChart, query: PathQuery) -> Path | None:
    """Stitch shortest segments through the via beats in the given order.

    Junction beats are merged, so the result is one continuous path; it may
    revisit beats across segments (each segment alone is simple).
    """
    stops = [query.start, *query.via, query.end]
    for stop in stops:
        chart.beat(stop)
    beats: tuple[str, ...] = (query.start,)
    total = 0.0
    for a, b in zip(stops, stops[1:]):
        segment = shortest_path(chart, a, b, query.weight_mode)
        if segment is None:
            return None
        beats = beats + segment.beats[1:]
        total += segment.total_weight
    return Path(beats=beats, total_weight=total)


def critical_path(chart: ExperienceChart, start: str, end: str) -> Path | None:
    """Minimum-hop path between two beats."""
    return shortest_path(chart, start, end, WeightMode.HOP_COUNT)


def take_snapshot(
    path: Path,
    label: str,
    snapshot_id: str | None = None,
    created_at: str | None = None,
) -> PathSnapshot:
    if snapshot_id is None:
        snapshot_id = "snap-" + uuid.uuid4().hex[:10]
    if created_at is None:
        created_at = datetime.now(timezone.utc).isoformat(timespec="seconds")
    return PathSnapshot(id=snapshot_id, label=label, path=path, created_at=created_at)


def validate_snapshot(chart: ExperienceChart, snapshot: PathSnapshot) -> str:
    """``"fresh"`` if the frozen path still exists in the chart, else ``"stale"``."""
    return "fresh" if path_is_valid(chart, snapshot.path.beats) else "stale"


def enumerate_routes(
    chart: ExperienceChart,
    sources: set[str] | frozenset[str],
    sinks: set[str] | frozenset[str],
    max_routes: int = 10_000,
    mode: WeightMode = WeightMode.HOP_COUNT,
) -> RouteEnumeration:
    """All simple paths from any source to any sink, lexicographic by beat ids.

    Truncates after ``max_routes`` paths and flags the overflow; the emitted
    prefix is stable under a larger limit.
    """
    if max_routes < 1:
        raise ValueError("max_routes must be >= 1")
    for beat_id in sorted(sources | sinks):
        chart.beat(beat_id)

    found: list[Path] = []
    truncated = False

    def walk(seq: list[str], weight: float, visited: set[str]) -> bool:
        nonlocal truncated
        node = seq[-1]
        if node in sinks:
            if len(found) >= max_routes:
                truncated = True
                return False
            found.append(Path(beats=tuple(seq), total_weight=weight))
        for nxt in chart.successors(node):
            if nxt in visited:
                continue
            visited.add(nxt)
            seq.append(nxt)
            ok = walk(seq, weight + edge_weight(chart, nxt, mode), visited)
            seq.pop()
            visited.remove(nxt)
            if not ok:
                return False
        return True

    for source in sorted(sources):
        if not walk([source], 0.0, {source}):
            break
    return RouteEnumeration(paths=tuple(found), truncated=truncated)


# -- route classification ----------------------------------------------


@dataclass(frozen=True)
class Predicate:
    """Composable membership test over the set of beats a path visits.

    kind is one of ``any_of`` / ``none_of`` (with ``beats``) or the
    combinators ``all`` / ``any`` / ``not`` (with ``parts``).
    """

    kind: str
    beats: frozenset[str] = frozenset()
    parts: tuple["Predicate", ...] = ()

    def matches(self, visited: frozenset[str]) -> bool:
        if self.kind == "any_of":
            return bool(self.beats & visited)
        if self.kind == "none_of":
            return not (self.beats & visited)
        if self.kind == "all":
            return all(p.matches(visited) for p in self.parts)
        if self.kind == "any":
            return any(p.matches(visited) for p in self.parts)
        if self.kind == "not":
            return not self.parts[0].matches(visited)
        raise ValueError(f"unknown predicate kind {self.kind!r}")


def contains_any_of(beats) -> Predicate:
    return Predicate(kind="any_of", beats=frozenset(beats))


def contains_none_of(beats) -> Predicate:
    return Predicate(kind="none_of", beats=frozenset(beats))


def p_all(*parts: Predicate) -> Predicate:
    return Predicate(kind="all", parts=tuple(parts))


def p_any(*parts: Predicate) -> Predicate:
    return Predicate(kind="any", parts=tuple(parts))


def p_not(part: Predicate) -> Predicate:
    return Predicate(kind="not", parts=(part,))


@dataclass(frozen=True)
class RouteRule:
    label: str
    predicate: Predicate


def classify_route(path: Path, rules: list[RouteRule]) -> list[str]:
    """Labels of all rules the path matches, in rule order."""
    visited = frozenset(path.beats)
    return [rule.label for rule in rules if rule.predicate.matches(visited)]


def predicate_from_dict(data: dict) -> Predicate:
    """Parse the JSON predicate notation used by rule files."""
    if not isinstance(data, dict) or len(data) != 1:
        raise ValueError("predicate must be an object with exactly one key")
    key, value = next(iter(data.items()))
    if key in ("any_of", "none_of"):
        if not isinstance(value, list) or not all(isinstance(v, str) for v in value):
            raise ValueError(f"{key} expects a list of beat ids")
        return Predicate(kind=key, beats=frozenset(value))
    if key in ("all", "any"):
        return Predicate(kind=key, parts=tuple(predicate_from_dict(v) for v in value))
    if key == "not":
        return Predicate(kind="not", parts=(predicate_from_dict(value),))
    raise ValueError(f"unknown predicate kind {key!r}")


def rules_from_list(data: list) -> list[RouteRule]:
    rules = []
    for item in data:
        body = {k: v for k, v in item.items() if k != "label"}
        rules.append(RouteRule(label=item["label"], predicate=predicate_from_dict(body)))
    return rules


def require_valid_path(chart: ExperienceChart, beats: tuple[str, ...] | list[str]) -> Path:
    """Build a Path from an explicit beat sequence, or raise InvalidPath."""
    if not path_is_valid(chart, beats):
        raise InvalidPath(f"beat sequence {list(beats)!r} is not a path in the chart")
    return Path(
        beats=tuple(beats),
        total_weight=path_weight(chart, beats, WeightMode.HOP_COUNT),
    )
