"""Tag/unit assignment at triage and triage service times."""

from ..distributions import RngStream, WeibullParams, categorical_index, weibull_quantile
from ..errors import ConfigurationError
from ..models.params import ParamVector
from ..models.scenario import ScenarioConfig
from ..tags import FEASIBLE_UNITS, Activity, TriageTag, UnitId, is_feasible, pair_label

_TAGS = tuple(TriageTag)


def route_from_uniforms(
    now: float,
    cfg: ScenarioConfig,
    u_tag: float,
    u_unit: float,
) -> tuple[TriageTag, UnitId]:
    """Deterministic routing given two uniforms (used by the trajectory)."""
    shift = cfg.shift_at(now)
    tag_weights = cfg.tag_weights(shift)
    tag = _TAGS[categorical_index([tag_weights.get(t, 0.0) for t in _TAGS], u_tag)]
    units = FEASIBLE_UNITS[tag]
    unit_weights = cfg.unit_probs[tag][shift]
    unit = units[categorical_index([unit_weights.get(u, 0.0) for u in units], u_unit)]
    return tag, unit


def assign_tag_and_unit(now: float, cfg: ScenarioConfig, rng: RngStream) -> tuple[TriageTag, UnitId]:
    """Draw the triage tag and ED unit of a patient starting triage at ``now``.

    Day-shift slots use the day tag mix (White possible, MIU open); every other
    slot uses the night mix.
    """
    u_tag = float(rng.uniform())
    u_unit = float(rng.uniform())
    return route_from_uniforms(now, cfg, u_tag, u_unit)


def triage_params(tag: TriageTag, unit: UnitId, params: ParamVector, u_coin: float) -> WeibullParams:
    """Triage distribution of a pair; Green/MIU flips a fair coin between Green/MU and Green/SU."""
    if not is_feasible(tag, unit):
        raise ConfigurationError(f"{pair_label(tag, unit)} is not a feasible assignment")
    if (tag, unit) == (TriageTag.GREEN, UnitId.MIU):
        unit = UnitId.MU if u_coin < 0.5 else UnitId.SU
    return params.weibull(Activity.TRIAGE, tag, unit)


def triage_duration(tag: TriageTag, unit: UnitId, params: ParamVector, rng: RngStream) -> float:
    """Triage is a pure delay: no queue forms before it."""
    p = triage_params(tag, unit, params, float(rng.uniform()))
    return weibull_quantile(p, float(rng.uniform()))
