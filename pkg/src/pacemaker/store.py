"""Project persistence: one human-readable JSON document per project.

Top-level keys are exactly ``version, name, specs, beats, edges, snapshots``
(extension ``.pace.json``). Output is canonical -- fixed key order, lists
sorted by id -- so the same project always serializes to the same bytes.

Loading enforces structure and referential integrity; value-range problems
(e.g. an out-of-range intensity) load fine and are reported by
``ExperienceChart.validate`` so broken files can still be inspected.
Snapshots are stored verbatim even when their paths have gone stale.
"""

from __future__ import annotations

import io
import json
import re
from dataclasses import dataclass, field
from pathlib import Path as FsPath
from typing import Any, BinaryIO

from .chart import Beat, DependencyEdge, ExperienceChart, ExperienceSpec
from .errors import (
    IntegrityError,
    ParseError,
    SchemaVersionUnsupported,
    UnknownBeat,
    UnknownSnapshot,
)
from .paths import Path, PathSnapshot, take_snapshot

SCHEMA_VERSION = 1
FILE_EXTENSION = ".pace.json"

_ID_RE = re.compile(r"^([a-z]+)(\d+)$")
_SNAP_RE = re.compile(r"^snap-(\d+)$")


@dataclass
class Project:
    name: str
    chart: ExperienceChart = field(default_factory=ExperienceChart)
    snapshots: list[PathSnapshot] = field(default_factory=list)
    schema_version: int = SCHEMA_VERSION

    def add_snapshot(self, path: Path, label: str) -> PathSnapshot:
        highest = 0
        for snap in self.snapshots:
            match = _SNAP_RE.match(snap.id)
            if match:
                highest = max(highest, int(match.group(1)))
        snapshot = take_snapshot(path, label, snapshot_id=f"snap-{highest + 1}")
        self.snapshots.append(snapshot)
        return snapshot

    def snapshot(self, snapshot_id: str) -> PathSnapshot:
        for snap in self.snapshots:
            if snap.id == snapshot_id:
                return snap
        raise UnknownSnapshot(f"no snapshot with id {snapshot_id!r}")

    def resolve_beat(self, ref: str) -> str:
        """Accept a beat id or an unambiguous beat name; return the id."""
        if ref in self.chart.beats:
            return ref
        found = self.chart.find_beat_by_name(ref)
        if found is None:
            raise UnknownBeat(f"no beat with id or unique name {ref!r}")
        return found.id


def _sort_key(identifier: str) -> tuple:
    match = _ID_RE.match(identifier)
    if match:
        return (0, match.group(1), int(match.group(2)))
    return (1, identifier, 0)


def project_to_dict(project: Project) -> dict[str, Any]:
    chart = project.chart
    return {
        "version": project.schema_version,
        "name": project.name,
        "specs": [
            {
                "id": s.id,
                "name": s.name,
                "description": s.description,
                "narrative_intensity": s.narrative_intensity,
                "gameplay_intensity": s.gameplay_intensity,
                "gameplay_category": s.gameplay_category,
                "expected_playtime": s.expected_playtime,
            }
            for s in sorted(chart.specs.values(), key=lambda s: _sort_key(s.id))
        ],
        "beats": [
            {
                "id": b.id,
                "name": b.name,
                "spec": b.spec,
                "position": list(b.position) if b.position is not None else None,
            }
            for b in sorted(chart.beats.values(), key=lambda b: _sort_key(b.id))
        ],
        "edges": [
            {"id": e.id, "from": e.source, "to": e.target}
            for e in sorted(chart.edges.values(), key=lambda e: _sort_key(e.id))
        ],
        "snapshots": [
            {
                "id": snap.id,
                "label": snap.label,
                "created_at": snap.created_at,
                "path": {
                    "beats": list(snap.path.beats),
                    "total_weight": snap.path.total_weight,
                },
            }
            for snap in project.snapshots
        ],
    }


def _expect(condition: bool, message: str) -> None:
    if not condition:
        raise ParseError(message)


def _number(value: Any, where: str) -> float:
    _expect(isinstance(value, (int, float)) and not isinstance(value, bool),
            f"{where} must be a number, got {value!r}")
    return float(value)


def project_from_dict(data: Any) -> Project:
    _expect(isinstance(data, dict), "document root must be an object")
    _expect(
        set(data.keys()) == {"version", "name", "specs", "beats", "edges", "snapshots"},
        f"top-level keys must be version/name/specs/beats/edges/snapshots, got {sorted(data.keys())}",
    )
    version = data["version"]
    _expect(isinstance(version, int), "version must be an integer")
    if version != SCHEMA_VERSION:
        raise SchemaVersionUnsupported(
            f"schema version {version} not supported (current: {SCHEMA_VERSION})"
        )
    _expect(isinstance(data["name"], str), "name must be a string")
    for key in ("specs", "beats", "edges", "snapshots"):
        _expect(isinstance(data[key], list), f"{key} must be a list")

    chart = ExperienceChart()
    for raw in data["specs"]:
        _expect(isinstance(raw, dict), "spec entries must be objects")
        spec_id = raw.get("id")
        _expect(isinstance(spec_id, str) and spec_id != "", "spec id must be a nonempty string")
        _expect(spec_id not in chart.specs, f"duplicate spec id {spec_id!r}")
        chart.specs[spec_id] = ExperienceSpec(
            id=spec_id,
            name=str(raw.get("name", "")),
            description=str(raw.get("description", "")),
            narrative_intensity=_number(raw.get("narrative_intensity", 0), "narrative_intensity"),
            gameplay_intensity=_number(raw.get("gameplay_intensity", 0), "gameplay_intensity"),
            gameplay_category=str(raw.get("gameplay_category", "")),
            expected_playtime=_number(raw.get("expected_playtime", 0), "expected_playtime"),
        )
    for raw in data["beats"]:
        _expect(isinstance(raw, dict), "beat entries must be objects")
        beat_id = raw.get("id")
        _expect(isinstance(beat_id, str) and beat_id != "", "beat id must be a nonempty string")
        _expect(beat_id not in chart.beats, f"duplicate beat id {beat_id!r}")
        position = raw.get("position")
        if position is not None:
            _expect(
                isinstance(position, list) and len(position) == 2,
                f"beat {beat_id!r} position must be [x, y]",
            )
            position = (_number(position[0], "position.x"), _number(position[1], "position.y"))
        spec_ref = raw.get("spec")
        _expect(spec_ref is None or isinstance(spec_ref, str), "beat spec must be a string or null")
        chart.beats[beat_id] = Beat(
            id=beat_id, name=str(raw.get("name", "")), spec=spec_ref, position=position
        )
    for raw in data["edges"]:
        _expect(isinstance(raw, dict), "edge entries must be objects")
        edge_id = raw.get("id")
        _expect(isinstance(edge_id, str) and edge_id != "", "edge id must be a nonempty string")
        _expect(edge_id not in chart.edges, f"duplicate edge id {edge_id!r}")
        source, target = raw.get("from"), raw.get("to")
        _expect(isinstance(source, str) and isinstance(target, str),
                f"edge {edge_id!r} needs string from/to")
        chart.edges[edge_id] = DependencyEdge(id=edge_id, source=source, target=target)

    snapshots: list[PathSnapshot] = []
    for raw in data["snapshots"]:
        _expect(isinstance(raw, dict), "snapshot entries must be objects")
        snap_id = raw.get("id")
        _expect(isinstance(snap_id, str) and snap_id != "", "snapshot id must be a nonempty string")
        raw_path = raw.get("path")
        _expect(isinstance(raw_path, dict), f"snapshot {snap_id!r} path must be an object")
        beats = raw_path.get("beats")
        _expect(
            isinstance(beats, list) and beats and all(isinstance(b, str) for b in beats),
            f"snapshot {snap_id!r} needs a nonempty list of beat ids",
        )
        snapshots.append(
            PathSnapshot(
                id=snap_id,
                label=str(raw.get("label", "")),
                created_at=str(raw.get("created_at", "")),
                path=Path(
                    beats=tuple(beats),
                    total_weight=_number(raw_path.get("total_weight", 0), "total_weight"),
                ),
            )
        )

    # unresolved references are integrity failures, not parse failures
    problems = [
        v for v in chart.validate() if v.rule in ("DanglingEdge", "UnknownSpecRef")
    ]
    if problems:
        detail = "; ".join(f"{v.rule}({v.element}): {v.message}" for v in problems)
        raise IntegrityError(detail)

    # future ids must clear everything the document references, including
    # beats that only live on in frozen snapshot paths
    referenced = list(chart.beats) + list(chart.edges) + list(chart.specs)
    referenced += [b for snap in snapshots for b in snap.path.beats]
    for identifier in referenced:
        match = _ID_RE.match(identifier)
        if match:
            chart.bump_counter(match.group(1), int(match.group(2)))

    return Project(
        name=data["name"], chart=chart, snapshots=snapshots, schema_version=version
    )


def dumps(project: Project) -> bytes:
    text = json.dumps(project_to_dict(project), indent=2, ensure_ascii=False)
    return (text + "\n").encode("utf-8")


def loads(document: bytes | str) -> Project:
    if isinstance(document, bytes):
        try:
            document = document.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise ParseError(f"not UTF-8: {exc}") from None
    try:
        data = json.loads(document)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc}") from None
    return project_from_dict(data)


def save(project: Project, sink: str | FsPath | BinaryIO) -> int:
    """Write the project document; returns the byte count."""
    payload = dumps(project)
    if isinstance(sink, (str, FsPath)):
        FsPath(sink).write_bytes(payload)
    else:
        sink.write(payload)
    return len(payload)


def load(source: str | FsPath | bytes | BinaryIO) -> Project:
    if isinstance(source, (str, FsPath)):
        try:
            raw: bytes = FsPath(source).read_bytes()
        except OSError as exc:
            raise ParseError(f"cannot read {source}: {exc}") from None
    elif isinstance(source, bytes):
        raw = source
    elif isinstance(source, io.IOBase) or hasattr(source, "read"):
        raw = source.read()
    else:
        raise TypeError(f"unsupported source {type(source)!r}")
    return loads(raw)
