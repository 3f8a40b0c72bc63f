"""Patient trajectory through the ED.

Each patient owns a fixed row of uniforms with one slot per random decision,
so a change of service-time parameters never shifts the random numbers used
by any other decision (common random numbers across evaluations).
"""

import logging
from dataclasses import dataclass
from enum import IntEnum

import numpy as np

from ..distributions import uniform_quantile, weibull_quantile
from ..models.params import ParamVector
from ..models.patient import Outcome, PatientRecord
from ..models.scenario import ScenarioConfig
from ..simcore.engine import SimulationEngine
from ..simcore.resources import CapacitySchedule, SurgePolicy
from ..tags import SURGE_RESOURCES, VISIT_RESOURCES, Activity, visit_resource
from .routing import route_from_uniforms, triage_params

logger = logging.getLogger(__name__)


class DrawSlot(IntEnum):
    """Column of a patient's uniform row."""

    DECEASED = 0
    TAG = 1
    UNIT = 2
    TRIAGE_COIN = 3
    TRIAGE = 4
    LWBS = 5
    PRE_QUEUE = 6
    VISIT = 7
    EXAMS = 8
    REMOVAL = 9
    TRANSFER = 10
    FINAL_WAIT = 11


N_DRAWS = len(DrawSlot)


@dataclass
class Patient:
    """An entity created by the arrival process."""

    id: int
    arrival: float
    draws: np.ndarray
    record: PatientRecord

    def u(self, slot: DrawSlot) -> float:
        return float(self.draws[slot])


def build_engine(cfg: ScenarioConfig, trace: bool = False) -> SimulationEngine:
    """Create the engine with the six visit resources of the scenario."""
    engine = SimulationEngine(cfg.horizon, trace=trace)
    surge = SurgePolicy(cfg.surge_threshold, cfg.surge_extra_seats) if cfg.surge_enabled else None
    for name in VISIT_RESOURCES:
        schedule = CapacitySchedule(cfg.seats[name].capacity_grid(), cfg.start_day)
        engine.add_resource(name, schedule, surge=surge if name in SURGE_RESOURCES else None)
    return engine


def simulate_patient(patient: Patient, cfg: ScenarioConfig, params: ParamVector, engine: SimulationEngine):
    """simpy process for one patient; fills ``patient.record`` as it goes.

    Order: deceased branch, triage delay, LWBS branch, pre-queue delay, visit
    seize/delay/release, exams delay, removal branch, final wait, discharge.
    A patient still active at the horizon keeps outcome IN_SYSTEM.
    """
    rec = patient.record
    rec.arrival = patient.arrival
    yield engine.timeout(patient.arrival - engine.now)

    if patient.u(DrawSlot.DECEASED) < cfg.p_deceased:
        rec.outcome = Outcome.DECEASED
        return

    rec.t0 = engine.now
    tag, unit = route_from_uniforms(rec.t0, cfg, patient.u(DrawSlot.TAG), patient.u(DrawSlot.UNIT))
    rec.tag, rec.unit = tag, unit

    triage = triage_params(tag, unit, params, patient.u(DrawSlot.TRIAGE_COIN))
    yield engine.timeout(weibull_quantile(triage, patient.u(DrawSlot.TRIAGE)))

    if patient.u(DrawSlot.LWBS) < cfg.lwbs_probability(tag):
        rec.outcome = Outcome.LWBS
        return

    lo, hi = cfg.pre_queue_interval(tag)
    yield engine.timeout(uniform_quantile(lo, hi, patient.u(DrawSlot.PRE_QUEUE)))

    resource = engine.resource(visit_resource(tag, unit))
    request = resource.seize(patient.id, tag.priority)
    yield request.event
    rec.t2 = engine.now

    visit = params.weibull(Activity.VISIT, tag, unit)
    yield engine.timeout(weibull_quantile(visit, patient.u(DrawSlot.VISIT)))
    resource.release(patient.id)
    rec.t3 = engine.now

    exams = params.weibull(Activity.EXAMS, tag, unit)
    yield engine.timeout(weibull_quantile(exams, patient.u(DrawSlot.EXAMS)))
    rec.exams_end = engine.now

    if patient.u(DrawSlot.REMOVAL) < cfg.removal_probability(tag, unit):
        if patient.u(DrawSlot.TRANSFER) < cfg.p_transferred_given_removed:
            rec.outcome = Outcome.TRANSFERRED
        else:
            rec.outcome = Outcome.LEFT_DURING_EXAMS
        rec.t6 = engine.now
        return

    final_wait = cfg.final_wait_params(tag, unit)
    yield engine.timeout(weibull_quantile(final_wait, patient.u(DrawSlot.FINAL_WAIT)))
    rec.t6 = engine.now
    rec.outcome = Outcome.DISCHARGED
