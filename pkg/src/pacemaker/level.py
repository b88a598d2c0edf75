"""Parametric platformer sections: intensity formulas, category rules, and
generation of the side-scroller demo experience chart.

A level is a list of sections with artifact parameters (tiles, enemies,
required jumps, ...). Intensity is approximated from those parameters:

    jump factor   f_j = jump_v + 3 * jump_h
    enemy factor  f_e = enemy_state * (enemies / tiles) * 400 * player_state
    intensity     f_i = round_half_up(f_j + f_e)

The gameplay category follows a strict priority: Reward (star state, goal or
secret sections) > Pit > Enemy > Platforming. Expected playtime is the tile
count in seconds. Beats are identified by section and the player state on
entry ("4-big"); transition rules (same-state, power-up upgrades, damage
downgrades, star span, branch/rejoin) induce the dependency edges.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Iterable

from .chart import ExperienceChart, ExperienceSpec
from .errors import InvalidRules, ParseError
from .paths import RouteRule, contains_any_of, contains_none_of, p_all
from .store import Project

CATEGORY_REWARD = "Reward"
CATEGORY_PIT = "Pit"
CATEGORY_ENEMY = "Enemy"
CATEGORY_PLATFORMING = "Platforming"

ENEMY_RISK_CONSTANT = 400  # maps the densest section to intensity 100
HORIZONTAL_JUMP_WEIGHT = 3  # pit jumps are deadlier than vertical climbs


class EnemyState(Enum):
    GROUND = 1.0
    PLATFORM = 0.5


class PlayerState(Enum):
    """Risk multiplier of the player's power-up state."""

    SMALL = 1.0
    BIG = 0.5
    FLOWER = 0.25
    STAR = 0.0

    @property
    def label(self) -> str:
        return self.name.lower()


BASE_STATES = ("small", "big", "flower")
_UPGRADE = {"small": "big", "big": "flower", "flower": None}
_PLAYER_BY_LABEL = {s.label: s for s in PlayerState}


def state_label(base: str, starred: bool) -> str:
    return f"{base}-star" if starred else base


def parse_state_label(label: str) -> tuple[str, bool]:
    starred = label.endswith("-star")
    base = label[: -len("-star")] if starred else label
    if base not in BASE_STATES:
        raise ValueError(f"unknown player state label {label!r}")
    return base, starred


def parse_beat_name(name: str) -> tuple[int, str]:
    """Split a generated beat name like ``"8-big-star"`` into (section, state)."""
    section_text, _, state = name.partition("-")
    base, starred = parse_state_label(state)
    return int(section_text), state_label(base, starred)


def effective_player(base: str, starred: bool) -> PlayerState:
    return PlayerState.STAR if starred else _PLAYER_BY_LABEL[base]


@dataclass(frozen=True)
class SectionModel:
    section_no: int
    tiles: int
    enemies: int = 0
    enemy_state: EnemyState = EnemyState.GROUND
    jump_v: int = 0
    jump_h: int = 0
    has_pit: bool = False
    has_powerup: bool = False
    is_reward_section: bool = False

    def __post_init__(self):
        if self.section_no < 1:
            raise ValueError("section_no must be positive")
        if self.tiles < 1:
            raise ValueError("tiles must be >= 1")
        if self.enemies < 0 or self.jump_v < 0 or self.jump_h < 0:
            raise ValueError("enemies and jump counts must be nonnegative")


def round_half_up(value: float) -> int:
    return math.floor(value + 0.5)


def jump_factor(section: SectionModel) -> float:
    return section.jump_v + section.jump_h * HORIZONTAL_JUMP_WEIGHT


def enemy_factor(section: SectionModel, player: PlayerState) -> float:
    return (
        section.enemy_state.value
        * (section.enemies / section.tiles)
        * ENEMY_RISK_CONSTANT
        * player.value
    )


def section_intensity(section: SectionModel, player: PlayerState) -> int:
    """Raw intensity (may exceed 100; clamped only when stored in a spec)."""
    return round_half_up(jump_factor(section) + enemy_factor(section, player))


def clamp_intensity(value: float) -> float:
    return min(100.0, max(0.0, float(value)))


def section_category(section: SectionModel, player: PlayerState) -> str:
    if player is PlayerState.STAR or section.is_reward_section:
        return CATEGORY_REWARD
    if section.has_pit:
        return CATEGORY_PIT
    if section.enemies >= 1:
        return CATEGORY_ENEMY
    return CATEGORY_PLATFORMING


def build_spec(
    section: SectionModel, player: PlayerState, spec_id: str = "", name: str | None = None
) -> ExperienceSpec:
    """Spec values for one section/state pair; Reward pins narrative to 100."""
    intensity = clamp_intensity(section_intensity(section, player))
    category = section_category(section, player)
    return ExperienceSpec(
        id=spec_id,
        name=name if name is not None else f"sec{section.section_no}-{player.label}",
        description=_describe(section),
        narrative_intensity=100.0 if category == CATEGORY_REWARD else intensity,
        gameplay_intensity=intensity,
        gameplay_category=category,
        expected_playtime=float(section.tiles),
    )


def _describe(section: SectionModel) -> str:
    bits = [f"{section.tiles} tiles", f"{section.enemies} enemies"]
    if section.has_pit:
        bits.append("pit")
    if section.has_powerup:
        bits.append("power-up")
    if section.is_reward_section:
        bits.append("reward")
    return f"Section {section.section_no} ({', '.join(bits)})"


# -- transition rules and chart generation --------------------------------


@dataclass(frozen=True)
class TransitionRules:
    """How the player moves between sections and states.

    The main chain runs through every section not listed in ``offchain``
    (in list order); branches add extra successors, rejoins give an
    off-chain section its way back. Power-up sections upgrade
    (small->big->flower), damage sections may drop any non-star state back
    to small, and the star picked up in ``star_section`` holds for the next
    ``star_duration`` chain sections.
    """

    powerup_sections: frozenset[int] = frozenset()
    damage_sections: frozenset[int] = frozenset()
    star_section: int | None = None
    star_duration: int = 2
    branches: dict[int, tuple[int, ...]] = field(default_factory=dict)
    rejoins: dict[int, int] = field(default_factory=dict)
    offchain: frozenset[int] = frozenset()

    @staticmethod
    def from_sections(
        sections: Iterable[SectionModel],
        star_section: int | None = None,
        star_duration: int = 2,
        branches: dict[int, tuple[int, ...]] | None = None,
        rejoins: dict[int, int] | None = None,
        offchain: Iterable[int] = (),
    ) -> "TransitionRules":
        """Derive power-up and damage sections from the section flags."""
        sections = list(sections)
        return TransitionRules(
            powerup_sections=frozenset(s.section_no for s in sections if s.has_powerup),
            damage_sections=frozenset(s.section_no for s in sections if s.enemies > 0),
            star_section=star_section,
            star_duration=star_duration,
            branches=dict(branches or {}),
            rejoins=dict(rejoins or {}),
            offchain=frozenset(offchain),
        )


def _validate_rules(sections: list[SectionModel], rules: TransitionRules) -> list[int]:
    known = [s.section_no for s in sections]
    if len(set(known)) != len(known):
        raise InvalidRules("duplicate section numbers")
    known_set = set(known)

    def check_known(numbers: Iterable[int], what: str) -> None:
        for n in numbers:
            if n not in known_set:
                raise InvalidRules(f"{what} references unknown section {n}")

    check_known(rules.powerup_sections, "powerup_sections")
    check_known(rules.damage_sections, "damage_sections")
    check_known(rules.offchain, "offchain")
    check_known(rules.branches.keys(), "branch source")
    check_known((t for targets in rules.branches.values() for t in targets), "branch target")
    check_known(rules.rejoins.keys(), "rejoin source")
    check_known(rules.rejoins.values(), "rejoin target")

    chain = [n for n in known if n not in rules.offchain]
    if not chain:
        raise InvalidRules("every section is off-chain")
    if known[0] in rules.offchain:
        raise InvalidRules("the first section cannot be off-chain")
    position = {n: i for i, n in enumerate(chain)}

    if rules.star_section is not None and rules.star_section not in position:
        raise InvalidRules(f"star section {rules.star_section} is not on the chain")
    if rules.star_duration < 1:
        raise InvalidRules("star_duration must be >= 1")
    for source in rules.rejoins:
        if source not in rules.offchain:
            raise InvalidRules(f"rejoin source {source} must be off-chain")
    for source, target in rules.rejoins.items():
        if target not in position:
            raise InvalidRules(f"rejoin target {target} is not on the chain")
        for branch_source, targets in rules.branches.items():
            if source in targets and branch_source in position:
                if position[target] <= position[branch_source]:
                    raise InvalidRules(
                        f"rejoin target {target} does not come after branch source {branch_source}"
                    )
    return chain


def _successors(rules: TransitionRules, chain: list[int]) -> dict[int, list[int]]:
    out: dict[int, list[int]] = {}
    position = {n: i for i, n in enumerate(chain)}
    for n in chain:
        nxt = [chain[position[n] + 1]] if position[n] + 1 < len(chain) else []
        out[n] = nxt + sorted(rules.branches.get(n, ()))
    for n in rules.offchain:
        nxt = [rules.rejoins[n]] if n in rules.rejoins else []
        out[n] = nxt + sorted(rules.branches.get(n, ()))
    return out


def _star_span(rules: TransitionRules, chain: list[int]) -> frozenset[int]:
    if rules.star_section is None:
        return frozenset()
    start = chain.index(rules.star_section) + 1
    return frozenset(chain[start : start + rules.star_duration])


_STATE_ORDER = [state_label(b, s) for s in (False, True) for b in BASE_STATES]


def _out_states(
    section_no: int,
    base: str,
    starred: bool,
    target: int,
    rules: TransitionRules,
    span: frozenset[int],
) -> list[tuple[str, bool]]:
    if starred:
        return [(base, target in span)]
    states: list[tuple[str, bool]] = [(base, False)]
    upgraded = _UPGRADE[base]
    if section_no in rules.powerup_sections and upgraded:
        states.append((upgraded, False))
    if section_no in rules.damage_sections and base != "small":
        states.append(("small", False))
    if section_no == rules.star_section and target in span:
        states.append((base, True))
        states.append(("small", True))
    seen: set[tuple[str, bool]] = set()
    unique = []
    for state in states:
        if state not in seen:
            seen.add(state)
            unique.append(state)
    return unique


def build_demo_chart(
    sections: list[SectionModel],
    rules: TransitionRules,
    name: str = "demo level",
) -> Project:
    """Generate a project whose chart holds one beat per reachable
    (section, entry-state) pair, with specs shared across states whose
    computed values coincide. Deterministic for identical inputs."""
    chain = _validate_rules(sections, rules)
    by_no = {s.section_no: s for s in sections}
    successors = _successors(rules, chain)
    span = _star_span(rules, chain)

    start = (chain[0], "small", False)
    reachable: set[tuple[int, str, bool]] = {start}
    transitions: set[tuple[tuple[int, str, bool], tuple[int, str, bool]]] = set()
    queue = deque([start])
    while queue:
        node = queue.popleft()
        section_no, base, starred = node
        for target in successors[section_no]:
            for nxt_base, nxt_star in _out_states(
                section_no, base, starred, target, rules, span
            ):
                nxt = (target, nxt_base, nxt_star)
                transitions.add((node, nxt))
                if nxt not in reachable:
                    reachable.add(nxt)
                    queue.append(nxt)

    list_position = {s.section_no: i for i, s in enumerate(sections)}

    def node_key(node: tuple[int, str, bool]) -> tuple[int, int]:
        section_no, base, starred = node
        return (list_position[section_no], _STATE_ORDER.index(state_label(base, starred)))

    project = Project(name=name)
    chart = project.chart

    # one spec per distinct value bundle within a section
    spec_of_node: dict[tuple[int, str, bool], str] = {}
    for section_no in sorted({n for n, _, _ in reachable}, key=list_position.get):
        section = by_no[section_no]
        nodes = sorted((n for n in reachable if n[0] == section_no), key=node_key)
        groups: list[tuple[tuple, list[tuple[int, str, bool]]]] = []
        for node in nodes:
            _, base, starred = node
            player = effective_player(base, starred)
            spec = build_spec(section, player)
            key = (
                spec.narrative_intensity,
                spec.gameplay_intensity,
                spec.gameplay_category,
                spec.expected_playtime,
            )
            for existing_key, members in groups:
                if existing_key == key:
                    members.append(node)
                    break
            else:
                groups.append((key, [node]))
        for key, members in groups:
            if len(groups) == 1:
                spec_name = f"sec{section_no}"
            elif all(starred for _, _, starred in members):
                spec_name = f"sec{section_no}-star"
            else:
                spec_name = f"sec{section_no}-{members[0][1]}"
            narrative, gameplay, category, playtime = key
            spec_id = chart.add_spec(
                name=spec_name,
                description=_describe(section),
                narrative_intensity=narrative,
                gameplay_intensity=gameplay,
                gameplay_category=category,
                expected_playtime=playtime,
            )
            for member in members:
                spec_of_node[member] = spec_id

    chain_position = {n: i for i, n in enumerate(chain)}

    def column(section_no: int) -> float:
        if section_no in chain_position:
            return float(chain_position[section_no])
        branch_from = [
            chain_position[src]
            for src, targets in rules.branches.items()
            if section_no in targets and src in chain_position
        ]
        rejoin_to = rules.rejoins.get(section_no)
        anchors = branch_from + (
            [chain_position[rejoin_to]] if rejoin_to in chain_position else []
        )
        return sum(anchors) / len(anchors) if anchors else float(len(chain))

    beat_of_node: dict[tuple[int, str, bool], str] = {}
    for node in sorted(reachable, key=node_key):
        section_no, base, starred = node
        row = _STATE_ORDER.index(state_label(base, starred))
        if section_no not in chain_position:
            row += len(_STATE_ORDER) + 1
        beat_of_node[node] = chart.add_beat(
            name=f"{section_no}-{state_label(base, starred)}",
            spec=spec_of_node[node],
            position=(60.0 + column(section_no) * 150.0, 60.0 + row * 90.0),
        )

    for source, target in sorted(
        transitions, key=lambda pair: (node_key(pair[0]), node_key(pair[1]))
    ):
        chart.add_edge(beat_of_node[source], beat_of_node[target])
    return project


# -- bundled demo level ----------------------------------------------------

# Approximate model of a classic side-scroller opening level, 14 sections.
# Tile counts follow the level geometry; enemy placement is a best-effort
# reading (sections 2 and 5 allow no state change, section 6 carries the
# platform enemies and the second power-up). Treat as demo data, not ground
# truth: nothing in the engine depends on these numbers.
_DEMO_LEVEL = (
    # (section, tiles, enemies, enemy_state, jump_v, jump_h, pit, powerup, reward)
    (1, 30, 1, EnemyState.GROUND, 0, 0, False, True, False),
    (2, 10, 0, EnemyState.GROUND, 4, 0, False, False, False),
    (3, 8, 2, EnemyState.GROUND, 0, 0, False, False, False),
    (4, 11, 1, EnemyState.GROUND, 0, 0, False, False, False),
    (5, 13, 0, EnemyState.GROUND, 0, 2, True, False, False),
    (6, 18, 2, EnemyState.PLATFORM, 0, 3, True, True, False),
    (7, 13, 2, EnemyState.GROUND, 0, 0, False, False, False),
    (8, 14, 3, EnemyState.GROUND, 0, 0, False, False, False),
    (9, 16, 4, EnemyState.GROUND, 0, 0, False, False, False),
    (10, 14, 0, EnemyState.GROUND, 1, 0, False, False, False),
    (11, 18, 0, EnemyState.GROUND, 1, 2, True, False, False),
    (12, 16, 2, EnemyState.GROUND, 1, 0, False, False, False),
    (13, 27, 0, EnemyState.GROUND, 1, 0, False, False, True),
    (14, 16, 0, EnemyState.GROUND, 0, 0, False, False, True),
)

DEMO_STAR_SECTION = 7
DEMO_BRANCHES = {4: (14,)}
DEMO_REJOINS = {14: 12}


def mario_sections(section_nos: Iterable[int] | None = None) -> list[SectionModel]:
    wanted = set(section_nos) if section_nos is not None else None
    out = []
    for no, tiles, enemies, estate, jv, jh, pit, powerup, reward in _DEMO_LEVEL:
        if wanted is not None and no not in wanted:
            continue
        out.append(
            SectionModel(
                section_no=no,
                tiles=tiles,
                enemies=enemies,
                enemy_state=estate,
                jump_v=jv,
                jump_h=jh,
                has_pit=pit,
                has_powerup=powerup,
                is_reward_section=reward,
            )
        )
    return out


def mario_rules(sections: list[SectionModel]) -> TransitionRules:
    """Demo transition rules, restricted to whichever sections are present."""
    present = {s.section_no for s in sections}
    star = DEMO_STAR_SECTION if DEMO_STAR_SECTION in present else None
    if star is not None and (star + 1) not in present:
        star = None  # span would be empty
    branches = {
        src: tuple(t for t in targets if t in present)
        for src, targets in DEMO_BRANCHES.items()
        if src in present
    }
    branches = {src: targets for src, targets in branches.items() if targets}
    rejoins = {
        src: target
        for src, target in DEMO_REJOINS.items()
        if src in present and target in present
    }
    offchain = {src for src in DEMO_REJOINS if src in present}
    return TransitionRules.from_sections(
        sections,
        star_section=star,
        branches=branches,
        rejoins=rejoins,
        offchain=offchain,
    )


def mario_project(
    section_nos: Iterable[int] | None = None, name: str = "World 1-1"
) -> Project:
    sections = mario_sections(section_nos)
    return build_demo_chart(sections, mario_rules(sections), name=name)


FIRST_FIVE_SECTIONS = (1, 2, 3, 4, 5, 14)


# -- route taxonomy --------------------------------------------------------


def _beats_by(project: Project, want) -> frozenset[str]:
    hits = []
    for beat in project.chart.beats.values():
        try:
            section_no, state = parse_beat_name(beat.name)
        except ValueError:
            continue
        base, starred = parse_state_label(state)
        if want(section_no, base, starred):
            hits.append(beat.id)
    return frozenset(hits)


def route_taxonomy(
    project: Project, sections: list[SectionModel], rules: TransitionRules
) -> list[RouteRule]:
    """The walkthrough's route labels over generated beat ids.

    Labels are independent: a route may match several (e.g. Big and Hidden).
    """
    order = {s.section_no: i for i, s in enumerate(sections)}
    chain = [s.section_no for s in sections if s.section_no not in rules.offchain]
    span = sorted(_star_span(rules, chain), key=order.get)
    hidden_sections = set(rules.offchain)

    rules_out: list[RouteRule] = []
    star_any = [
        _beats_by(project, lambda n, b, st, sec=sec: st and n == sec) for sec in span
    ]
    hidden_beats = _beats_by(project, lambda n, b, st: n in hidden_sections)
    no_star = contains_none_of(
        _beats_by(project, lambda n, b, st: st and n in set(span))
    )
    rules_out.append(
        RouteRule("Neutral", p_all(no_star, contains_none_of(hidden_beats)))
    )
    if star_any:
        rules_out.append(
            RouteRule("Star", p_all(*(contains_any_of(beats) for beats in star_any)))
        )
    if hidden_beats:
        rules_out.append(RouteRule("Hidden", contains_any_of(hidden_beats)))

    rules_out.append(
        RouteRule(
            "Small",
            contains_none_of(_beats_by(project, lambda n, b, st: b != "small")),
        )
    )
    powerups = sorted(rules.powerup_sections, key=order.get)
    if powerups:
        first = order[powerups[0]]
        small_after_first = _beats_by(
            project, lambda n, b, st: b == "small" and order[n] > first
        )
        flower_any = _beats_by(project, lambda n, b, st: b == "flower")
        rules_out.append(
            RouteRule(
                "Big",
                p_all(
                    contains_none_of(small_after_first), contains_none_of(flower_any)
                ),
            )
        )
        if len(powerups) > 1:
            second = order[powerups[1]]
            big_after_second = _beats_by(
                project, lambda n, b, st: b == "big" and order[n] > second
            )
            rules_out.append(
                RouteRule(
                    "Flower",
                    p_all(
                        contains_none_of(small_after_first),
                        contains_none_of(big_after_second),
                    ),
                )
            )
    return rules_out


# -- demo-config documents ---------------------------------------------------


def section_from_dict(data: dict[str, Any]) -> SectionModel:
    try:
        return SectionModel(
            section_no=int(data["section_no"]),
            tiles=int(data["tiles"]),
            enemies=int(data.get("enemies", 0)),
            enemy_state=EnemyState[str(data.get("enemy_state", "ground")).upper()],
            jump_v=int(data.get("jump_v", 0)),
            jump_h=int(data.get("jump_h", 0)),
            has_pit=bool(data.get("has_pit", False)),
            has_powerup=bool(data.get("has_powerup", False)),
            is_reward_section=bool(data.get("is_reward_section", False)),
        )
    except (KeyError, ValueError, TypeError) as exc:
        raise ParseError(f"bad section entry {data!r}: {exc}") from None


def demo_config_from_dict(data: Any) -> tuple[str, list[SectionModel], TransitionRules]:
    if not isinstance(data, dict) or "sections" not in data:
        raise ParseError("demo config must be an object with a 'sections' list")
    sections = [section_from_dict(entry) for entry in data["sections"]]
    raw_rules = data.get("rules", {})
    if not isinstance(raw_rules, dict):
        raise ParseError("'rules' must be an object")
    try:
        rules = TransitionRules.from_sections(
            sections,
            star_section=raw_rules.get("star_section"),
            star_duration=int(raw_rules.get("star_duration", 2)),
            branches={
                int(k): tuple(int(t) for t in v)
                for k, v in raw_rules.get("branches", {}).items()
            },
            rejoins={int(k): int(v) for k, v in raw_rules.get("rejoins", {}).items()},
            offchain=[int(n) for n in raw_rules.get("offchain", [])],
        )
    except (ValueError, TypeError) as exc:
        raise ParseError(f"bad rules: {exc}") from None
    return str(data.get("name", "custom level")), sections, rules


