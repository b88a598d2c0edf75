"""Experience chart: beats, dependency edges, and the spec catalog.

The chart is a plain directed graph (a flat statechart: atomic states only,
cycles allowed). All mutation goes through the methods here, which keep
referential integrity; ``validate`` re-checks the invariants for data that
arrived from outside (files, tests poking at internals).
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import DuplicateEdge, SelfLoop, UnknownBeat, UnknownEdge, UnknownSpec


@dataclass
class ExperienceSpec:
    """Named bundle of rhythmic parameters assignable to any number of beats."""

    id: str
    name: str
    description: str = ""
    narrative_intensity: float = 0.0
    gameplay_intensity: float = 0.0
    gameplay_category: str = "Gameplay"
    expected_playtime: float = 0.0  # seconds


def computed_intensity(spec: ExperienceSpec) -> float:
    """Overall intensity: exact average of narrative and gameplay (no rounding)."""
    return (spec.narrative_intensity + spec.gameplay_intensity) / 2


@dataclass
class Beat:
    id: str
    name: str
    spec: str | None = None  # ExperienceSpec id
    position: tuple[float, float] | None = None  # layout only; engine never reads it


@dataclass
class DependencyEdge:
    """Directed dependency: the target beat follows after the source beat."""

    id: str
    source: str
    target: str


@dataclass(frozen=True)
class Violation:
    """One broken invariant, naming the offending element."""

    rule: str
    element: str
    message: str


@dataclass
class ExperienceChart:
    beats: dict[str, Beat] = field(default_factory=dict)
    edges: dict[str, DependencyEdge] = field(default_factory=dict)
    specs: dict[str, ExperienceSpec] = field(default_factory=dict)
    counters: dict[str, int] = field(default_factory=dict)

    # -- id generation -------------------------------------------------

    def _next_id(self, kind: str) -> str:
        n = self.counters.get(kind, 0) + 1
        self.counters[kind] = n
        return f"{kind}{n}"

    def bump_counter(self, kind: str, seen: int) -> None:
        """Ensure future ids of ``kind`` are numbered above ``seen``."""
        if seen > self.counters.get(kind, 0):
            self.counters[kind] = seen

    # -- lookups -------------------------------------------------------

    def beat(self, beat_id: str) -> Beat:
        try:
            return self.beats[beat_id]
        except KeyError:
            raise UnknownBeat(f"no beat with id {beat_id!r}") from None

    def spec(self, spec_id: str) -> ExperienceSpec:
        try:
            return self.specs[spec_id]
        except KeyError:
            raise UnknownSpec(f"no experience spec with id {spec_id!r}") from None

    def edge(self, edge_id: str) -> DependencyEdge:
        try:
            return self.edges[edge_id]
        except KeyError:
            raise UnknownEdge(f"no edge with id {edge_id!r}") from None

    def has_edge(self, source: str, target: str) -> bool:
        return (source, target) in self._pair_index()

    def _pair_index(self) -> set[tuple[str, str]]:
        return {(e.source, e.target) for e in self.edges.values()}

    def successors(self, beat_id: str) -> list[str]:
        """Target beats of all out-edges, in deterministic (sorted) order."""
        return sorted(e.target for e in self.edges.values() if e.source == beat_id)

    def find_beat_by_name(self, name: str) -> Beat | None:
        """Resolve a display name to a beat if the name is unambiguous."""
        hits = [b for b in self.beats.values() if b.name == name]
        return hits[0] if len(hits) == 1 else None

    # -- mutation ------------------------------------------------------

    def add_beat(
        self,
        name: str,
        spec: str | None = None,
        position: tuple[float, float] | None = None,
    ) -> str:
        if spec is not None and spec not in self.specs:
            raise UnknownSpec(f"no experience spec with id {spec!r}")
        beat_id = self._next_id("b")
        self.beats[beat_id] = Beat(id=beat_id, name=name, spec=spec, position=position)
        return beat_id

    def update_beat(
        self,
        beat_id: str,
        name: str | None = None,
        position: tuple[float, float] | None = None,
    ) -> Beat:
        beat = self.beat(beat_id)
        if name is not None:
            beat.name = name
        if position is not None:
            beat.position = position
        return beat

    def remove_beat(self, beat_id: str) -> int:
        """Remove a beat and cascade its incident edges; returns edges removed."""
        self.beat(beat_id)
        incident = [
            eid
            for eid, e in self.edges.items()
            if e.source == beat_id or e.target == beat_id
        ]
        for eid in incident:
            del self.edges[eid]
        del self.beats[beat_id]
        return len(incident)

    def add_edge(self, source: str, target: str) -> str:
        self.beat(source)
        self.beat(target)
        if source == target:
            raise SelfLoop(f"beat {source!r} cannot depend on itself")
        if self.has_edge(source, target):
            raise DuplicateEdge(f"edge {source!r} -> {target!r} already exists")
        edge_id = self._next_id("e")
        self.edges[edge_id] = DependencyEdge(id=edge_id, source=source, target=target)
        return edge_id

    def remove_edge(self, edge_id: str) -> None:
        self.edge(edge_id)
        del self.edges[edge_id]

    def add_spec(
        self,
        name: str,
        description: str = "",
        narrative_intensity: float = 0.0,
        gameplay_intensity: float = 0.0,
        gameplay_category: str = "Gameplay",
        expected_playtime: float = 0.0,
    ) -> str:
        spec_id = self._next_id("s")
        self.specs[spec_id] = ExperienceSpec(
            id=spec_id,
            name=name,
            description=description,
            narrative_intensity=narrative_intensity,
            gameplay_intensity=gameplay_intensity,
            gameplay_category=gameplay_category,
            expected_playtime=expected_playtime,
        )
        return spec_id

    def update_spec(self, spec_id: str, **fields) -> ExperienceSpec:
        spec = self.spec(spec_id)
        for key, value in fields.items():
            if not hasattr(spec, key) or key == "id":
                raise ValueError(f"unknown spec field {key!r}")
            setattr(spec, key, value)
        return spec

    def remove_spec(self, spec_id: str) -> int:
        """Delete a spec, unassigning it from all beats; returns beats touched."""
        self.spec(spec_id)
        touched = 0
        for beat in self.beats.values():
            if beat.spec == spec_id:
                beat.spec = None
                touched += 1
        del self.specs[spec_id]
        return touched

    def assign_spec(self, beat_id: str, spec: str | None = None) -> str | None:
        """Assign (or with ``spec=None`` unassign) a spec; returns the previous one."""
        beat = self.beat(beat_id)
        if spec is not None and spec not in self.specs:
            raise UnknownSpec(f"no experience spec with id {spec!r}")
        previous = beat.spec
        beat.spec = spec
        return previous

    # -- validation ----------------------------------------------------

    def validate(self) -> list[Violation]:
        """Check every type invariant; violations are data, not exceptions."""
        out: list[Violation] = []
        for spec in self.specs.values():
            if not spec.id:
                out.append(Violation("EmptyId", repr(spec.name), "spec id is empty"))
            for label, value in (
                ("narrative_intensity", spec.narrative_intensity),
                ("gameplay_intensity", spec.gameplay_intensity),
            ):
                if not 0 <= value <= 100:
                    out.append(
                        Violation(
                            "IntensityOutOfRange",
                            spec.id,
                            f"{label} {value!r} outside [0, 100]",
                        )
                    )
            if spec.expected_playtime < 0:
                out.append(
                    Violation(
                        "NegativePlaytime",
                        spec.id,
                        f"expected_playtime {spec.expected_playtime!r} < 0",
                    )
                )
            if not spec.gameplay_category:
                out.append(
                    Violation("EmptyCategory", spec.id, "gameplay_category is empty")
                )
        for beat in self.beats.values():
            if not beat.id:
                out.append(Violation("EmptyId", repr(beat.name), "beat id is empty"))
            if beat.spec is not None and beat.spec not in self.specs:
                out.append(
                    Violation(
                        "UnknownSpecRef",
                        beat.id,
                        f"beat references missing spec {beat.spec!r}",
                    )
                )
        seen_pairs: set[tuple[str, str]] = set()
        for edge in self.edges.values():
            for endpoint in (edge.source, edge.target):
                if endpoint not in self.beats:
                    out.append(
                        Violation(
                            "DanglingEdge",
                            edge.id,
                            f"edge endpoint {endpoint!r} is not a beat",
                        )
                    )
            if edge.source == edge.target:
                out.append(
                    Violation("SelfLoopEdge", edge.id, "edge connects a beat to itself")
                )
            pair = (edge.source, edge.target)
            if pair in seen_pairs:
                out.append(
                    Violation(
                        "DuplicateEdgePair",
                        edge.id,
                        f"second edge for pair {pair!r}",
                    )
                )
            seen_pairs.add(pair)
        return out
