"""Decision variables of the calibration problem.

The unknowns are the Weibull shape/scale pairs of triage, visit and exams per
(tag, unit). Each entry is addressed by a ParamKey; a ParamVector maps keys to
values and keeps a canonical key order so it can be flattened for the
optimizer.
"""

import logging
import math
from dataclasses import dataclass, field
from decimal import ROUND_HALF_UP, Decimal

from ..distributions import WeibullParams
from ..errors import ConfigurationError
from ..tags import (
    PAIRS_BY_ACTIVITY,
    Activity,
    ParamRole,
    TriageTag,
    UnitId,
    pair_label,
    parameter_pair,
    parse_pair_label,
)

logger = logging.getLogger(__name__)

_ACTIVITY_ORDER = {a: i for i, a in enumerate(Activity)}


@dataclass(frozen=True)
class ParamKey:
    """Address of one decision variable."""

    activity: Activity
    tag: TriageTag
    unit: UnitId
    role: ParamRole

    @property
    def label(self) -> str:
        return f"{self.activity.value}/{pair_label(self.tag, self.unit)}/{self.role.name.lower()}"

    def sort_key(self) -> tuple[int, int, int]:
        pairs = PAIRS_BY_ACTIVITY[self.activity]
        pair_index = pairs.index((self.tag, self.unit)) if (self.tag, self.unit) in pairs else len(pairs)
        return _ACTIVITY_ORDER[self.activity], pair_index, int(self.role)

    def __repr__(self) -> str:
        return f"ParamKey({self.label})"


def decision_keys() -> list[ParamKey]:
    """All decision variables of the case study, in canonical order."""
    return [
        ParamKey(activity, tag, unit, role)
        for activity in Activity
        for tag, unit in PAIRS_BY_ACTIVITY[activity]
        for role in ParamRole
    ]


@dataclass
class ParamVector:
    """Values of the decision variables.

    Lookups of Weibull pairs follow the folding rules: Red/RA uses the Red/MU
    entries. Green/MIU triage is resolved by the caller (coin flip).
    """

    values: dict[ParamKey, float] = field(default_factory=dict)

    def keys(self) -> list[ParamKey]:
        return sorted(self.values, key=ParamKey.sort_key)

    def __len__(self) -> int:
        return len(self.values)

    def __getitem__(self, key: ParamKey) -> float:
        return self.values[key]

    def as_list(self, keys: list[ParamKey] | None = None) -> list[float]:
        return [self.values[k] for k in (keys or self.keys())]

    @classmethod
    def from_list(cls, keys: list[ParamKey], values: list[float]) -> "ParamVector":
        if len(keys) != len(values):
            raise ValueError(f"{len(keys)} keys but {len(values)} values")
        return cls(dict(zip(keys, values, strict=True)))

    def weibull(self, activity: Activity, tag: TriageTag, unit: UnitId) -> WeibullParams:
        """Weibull parameters for an activity of a feasible (tag, unit) pair.

        Raises
        ------
            ConfigurationError: if the pair has no entry

        """
        ptag, punit = parameter_pair(tag, unit)
        shape_key = ParamKey(activity, ptag, punit, ParamRole.SHAPE)
        scale_key = ParamKey(activity, ptag, punit, ParamRole.SCALE)
        try:
            return WeibullParams(self.values[shape_key], self.values[scale_key])
        except KeyError:
            raise ConfigurationError(
                f"no {activity.value} parameters for {pair_label(tag, unit)}",
            ) from None

    def with_weibull(self, activity: Activity, tag: TriageTag, unit: UnitId, p: WeibullParams) -> "ParamVector":
        values = dict(self.values)
        values[ParamKey(activity, tag, unit, ParamRole.SHAPE)] = p.shape
        values[ParamKey(activity, tag, unit, ParamRole.SCALE)] = p.scale
        return ParamVector(values)

    def require(self, keys: list[ParamKey]) -> None:
        """Raise ConfigurationError listing any missing keys."""
        missing = [k.label for k in keys if k not in self.values]
        if missing:
            raise ConfigurationError(f"parameter vector is missing entries: {missing}")

    def to_dict(self) -> dict[str, dict[str, dict[str, float]]]:
        """Nested JSON form: {activity: {"G/MU": {"shape": .., "scale": ..}}}."""
        out: dict[str, dict[str, dict[str, float]]] = {}
        for key in self.keys():
            cell = out.setdefault(key.activity.value, {}).setdefault(pair_label(key.tag, key.unit), {})
            cell[key.role.name.lower()] = self.values[key]
        return out

    @classmethod
    def from_dict(cls, data: dict[str, dict[str, dict[str, float]]]) -> "ParamVector":
        values: dict[ParamKey, float] = {}
        try:
            for activity_name, cells in data.items():
                activity = Activity(activity_name)
                for label, pair in cells.items():
                    tag, unit = parse_pair_label(label)
                    for role in ParamRole:
                        values[ParamKey(activity, tag, unit, role)] = float(pair[role.name.lower()])
        except (KeyError, ValueError, TypeError, AttributeError) as e:
            raise ConfigurationError(f"malformed parameter data: {e}") from e
        return cls(values)

    def __repr__(self) -> str:
        return f"ParamVector({len(self.values)} entries)"


@dataclass(frozen=True)
class Granularity:
    """Lattice spacing per parameter role."""

    delta_shape: float = 1e-3
    delta_scale: float = 1e-4

    def __post_init__(self) -> None:
        if self.delta_shape <= 0 or self.delta_scale <= 0:
            raise ValueError("granularities must be positive")

    def delta(self, key: ParamKey) -> float:
        return self.delta_shape if key.role == ParamRole.SHAPE else self.delta_scale


@dataclass
class Bounds:
    """Box bounds per decision variable."""

    lower: dict[ParamKey, float] = field(default_factory=dict)
    upper: dict[ParamKey, float] = field(default_factory=dict)

    def __post_init__(self) -> None:
        for key, lo in self.lower.items():
            hi = self.upper.get(key)
            if hi is None or not lo < hi:
                raise ValueError(f"bounds for {key.label} need lower < upper, got ({lo}, {hi})")

    def clamp(self, key: ParamKey, value: float) -> float:
        return min(max(value, self.lower[key]), self.upper[key])

    def contains(self, params: ParamVector) -> bool:
        return all(self.lower[k] <= v <= self.upper[k] for k, v in params.values.items())


def default_bounds(
    keys: list[ParamKey] | None = None,
    lower: float = 0.01,
    shape_upper: float = 1000.0,
    scale_upper: dict[str, float] | None = None,
) -> Bounds:
    """Bounds of the case study: lower 0.01, shape upper 1000, activity-specific scale uppers."""
    scale_upper = scale_upper or {"triage": 0.5, "visit": 4.0, "exams": 40.0}
    keys = keys or decision_keys()
    lo = dict.fromkeys(keys, lower)
    hi = {
        k: shape_upper if k.role == ParamRole.SHAPE else scale_upper[k.activity.value] for k in keys
    }
    return Bounds(lo, hi)


def snap(value: float, delta: float) -> float:
    """Round to the nearest multiple of ``delta``.

    Works on the shortest decimal form of both numbers, so 0.42365 is a tie
    on a 1e-4 lattice; ties round half up (away from zero).
    """
    step = Decimal(str(float(delta)))
    steps = (Decimal(str(float(value))) / step).quantize(Decimal(1), rounding=ROUND_HALF_UP)
    return float(steps * step)


def clamp_to_problem(params: ParamVector, bounds: Bounds, granularity: Granularity) -> ParamVector:
    """Clamp every entry into its bounds and snap it to the lattice, warning on changes."""
    values: dict[ParamKey, float] = {}
    for key, value in params.values.items():
        delta = granularity.delta(key)
        lo = math.ceil(bounds.lower[key] / delta - 1e-9)
        hi = math.floor(bounds.upper[key] / delta + 1e-9)
        snapped = snap(min(max(value, lo * delta), hi * delta), delta)
        if abs(snapped - value) > 1e-9:
            logger.warning("%s adjusted from %g to %g to fit bounds and granularity", key.label, value, snapped)
        values[key] = snapped
    return ParamVector(values)
