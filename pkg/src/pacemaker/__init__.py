"""Pacing engine for non-linear games.

Model play as a directed graph of beats with experience specifications,
select and compare paths, and turn them into pacing-diagram data ready for
rendering or export.
"""

from .chart import (
    Beat,
    DependencyEdge,
    ExperienceChart,
    ExperienceSpec,
    Violation,
    computed_intensity,
)
from .diagrams import (
    TIMESCALES,
    AxisMode,
    CategorySegment,
    CategoryTimeline,
    DiagramData,
    DiagramKind,
    IntensitySeries,
    IntensitySetting,
    TimeAxis,
    category_diagram,
    intensity_diagram,
    toggle_hidden,
)
from .export import parse_csv, to_csv, to_svg
from .level import (
    EnemyState,
    PlayerState,
    SectionModel,
    TransitionRules,
    build_demo_chart,
    build_spec,
    enemy_factor,
    jump_factor,
    mario_project,
    route_taxonomy,
    section_category,
    section_intensity,
)
from .paths import (
    Path,
    PathQuery,
    PathSnapshot,
    RouteRule,
    WeightMode,
    classify_route,
    critical_path,
    enumerate_routes,
    shortest_path,
    take_snapshot,
    validate_snapshot,
    waypoint_path,
)
from .store import Project, load, save

__version__ = "0.1.0"

__all__ = [
    "Beat",
    "DependencyEdge",
    "ExperienceChart",
    "ExperienceSpec",
    "Violation",
    "computed_intensity",
    "TIMESCALES",
    "AxisMode",
    "CategorySegment",
    "CategoryTimeline",
    "DiagramData",
    "DiagramKind",
    "IntensitySeries",
    "IntensitySetting",
    "TimeAxis",
    "category_diagram",
    "intensity_diagram",
    "toggle_hidden",
    "parse_csv",
    "to_csv",
    "to_svg",
    "EnemyState",
    "PlayerState",
    "SectionModel",
    "TransitionRules",
    "build_demo_chart",
    "build_spec",
    "enemy_factor",
    "jump_factor",
    "mario_project",
    "route_taxonomy",
    "section_category",
    "section_intensity",
    "Path",
    "PathQuery",
    "PathSnapshot",
    "RouteRule",
    "WeightMode",
    "classify_route",
    "critical_path",
    "enumerate_routes",
    "shortest_path",
    "take_snapshot",
    "validate_snapshot",
    "waypoint_path",
    "Project",
    "load",
    "save",
]
