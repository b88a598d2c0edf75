"""Exception types shared across the engine."""

from __future__ import annotations


class PacemakerError(Exception):
    """Base class for all engine errors."""

    code = "EngineError"


class UnknownBeat(PacemakerError):
    code = "UnknownBeat"


class UnknownSpec(PacemakerError):
    code = "UnknownSpec"


class UnknownEdge(PacemakerError):
    code = "UnknownEdge"


class SelfLoop(PacemakerError):
    code = "SelfLoop"


class DuplicateEdge(PacemakerError):
    code = "DuplicateEdge"


class InvalidPath(PacemakerError):
    code = "InvalidPath"


class MissingSpec(PacemakerError):
    """A category timeline hit a beat without an assigned spec."""

    code = "MissingSpec"

    def __init__(self, beat_id: str):
        super().__init__(f"beat {beat_id!r} has no experience specification assigned")
        self.beat_id = beat_id


class UnknownSeries(PacemakerError):
    code = "UnknownSeries"


class UnknownSnapshot(PacemakerError):
    code = "UnknownSnapshot"


class ParseError(PacemakerError):
    code = "ParseError"


class SchemaVersionUnsupported(PacemakerError):
    code = "SchemaVersionUnsupported"


class IntegrityError(PacemakerError):
    code = "IntegrityError"


class InvalidRules(PacemakerError):
    code = "InvalidRules"


class UnknownProject(PacemakerError):
    code = "UnknownProject"


class StaleRevision(PacemakerError):
    code = "StaleRevision"
