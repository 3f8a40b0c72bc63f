"""Triage tags, ED units and the feasible-assignment matrix."""

from enum import Enum, IntEnum
from typing import TypedDict


class TriageTag(str, Enum):
    """Urgency color assigned at triage."""

    WHITE = "W"
    GREEN = "G"
    YELLOW = "Y"
    RED = "R"

    @property
    def priority(self) -> int:
        """Queue priority of the tag (higher is served first)."""
        return _PRIORITY[self]

    def display_name(self) -> str:
        return self.name.capitalize()


class UnitId(str, Enum):
    """ED units and the red-dedicated visit areas."""

    MU = "MU"
    SU = "SU"
    RA = "RA"
    MIU = "MIU"
    MU_RED = "MU-red"
    SU_RED = "SU-red"


class Activity(str, Enum):
    """Activities whose service times are calibrated."""

    TRIAGE = "triage"
    VISIT = "visit"
    EXAMS = "exams"


class ParamRole(IntEnum):
    """Position of a Weibull parameter inside its pair."""

    SHAPE = 1
    SCALE = 2


_PRIORITY = {
    TriageTag.RED: 3,
    TriageTag.YELLOW: 2,
    TriageTag.GREEN: 1,
    TriageTag.WHITE: 0,
}

FEASIBLE_UNITS: dict[TriageTag, tuple[UnitId, ...]] = {
    TriageTag.WHITE: (UnitId.MIU,),
    TriageTag.GREEN: (UnitId.MU, UnitId.SU, UnitId.MIU),
    TriageTag.YELLOW: (UnitId.MU, UnitId.SU),
    TriageTag.RED: (UnitId.MU, UnitId.SU, UnitId.RA),
}

Cell = tuple[TriageTag, UnitId]

FEASIBLE_PAIRS: tuple[Cell, ...] = tuple(
    (tag, unit) for tag, units in FEASIBLE_UNITS.items() for unit in units
)

# Red/RA shares the Red/MU service-time parameters.
FOLDED_PAIRS: dict[Cell, Cell] = {
    (TriageTag.RED, UnitId.RA): (TriageTag.RED, UnitId.MU),
}

DECISION_PAIRS: tuple[Cell, ...] = tuple(p for p in FEASIBLE_PAIRS if p not in FOLDED_PAIRS)

# Green/MIU triage is a coin flip between Green/MU and Green/SU triage.
TRIAGE_PAIRS: tuple[Cell, ...] = tuple(
    p for p in DECISION_PAIRS if p != (TriageTag.GREEN, UnitId.MIU)
)

PAIRS_BY_ACTIVITY: dict[Activity, tuple[Cell, ...]] = {
    Activity.TRIAGE: TRIAGE_PAIRS,
    Activity.VISIT: DECISION_PAIRS,
    Activity.EXAMS: DECISION_PAIRS,
}

VISIT_RESOURCES: tuple[str, ...] = ("MU", "SU", "MIU", "MU-red", "SU-red", "RA")
SURGE_RESOURCES: tuple[str, ...] = ("MU", "SU")

_RED_AREAS = {
    UnitId.MU: UnitId.MU_RED,
    UnitId.SU: UnitId.SU_RED,
    UnitId.RA: UnitId.RA,
}


class TagInfo(TypedDict):
    """Descriptive information about a triage tag."""

    name: str
    priority: int
    units: list[str]
    description: str


TAG_DESCRIPTIONS: dict[TriageTag, str] = {
    TriageTag.WHITE: "Non-urgent; seen only in the minor injuries unit while it is open.",
    TriageTag.GREEN: "Minor urgency; medical, surgical or minor injuries unit.",
    TriageTag.YELLOW: "Urgent; shares medical and surgical seats with green patients.",
    TriageTag.RED: "Emergency; dedicated red areas of MU and SU, or the resuscitation area.",
}


def is_feasible(tag: TriageTag, unit: UnitId) -> bool:
    """Check a (tag, unit) pair against the feasible-assignment matrix."""
    return unit in FEASIBLE_UNITS.get(tag, ())


def parameter_pair(tag: TriageTag, unit: UnitId) -> Cell:
    """Map a feasible pair onto the pair that owns its service-time parameters."""
    return FOLDED_PAIRS.get((tag, unit), (tag, unit))


def visit_resource(tag: TriageTag, unit: UnitId) -> str:
    """Name of the seat pool used for the medical visit.

    Red patients use dedicated capacity disjoint from yellow/green seats.
    """
    if tag == TriageTag.RED:
        return _RED_AREAS[unit].value
    return unit.value


def pair_label(tag: TriageTag, unit: UnitId) -> str:
    return f"{tag.value}/{unit.value}"


def parse_pair_label(label: str) -> Cell:
    """Parse a 'G/MU' style label."""
    tag_str, _, unit_str = label.partition("/")
    return TriageTag(tag_str), UnitId(unit_str)


def get_tag_info(tag: TriageTag) -> TagInfo:
    return {
        "name": tag.display_name(),
        "priority": tag.priority,
        "units": [u.value for u in FEASIBLE_UNITS[tag]],
        "description": TAG_DESCRIPTIONS[tag],
    }
