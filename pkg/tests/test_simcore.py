"""Tests for the discrete-event kernel and the replication runner."""

import numpy as np
import pytest
import simpy

from edcal.errors import EngineError
from edcal.models.params import ParamVector
from edcal.models.scenario import ScenarioConfig
from edcal.simcore import (
    CapacitySchedule,
    EventTrace,
    ScheduledResource,
    SimulationEngine,
    SurgePolicy,
    TraceEvent,
    audit_census,
    audit_conservation,
    audit_trace,
)
from edcal.simcore.replication import run_replication, run_replications
from edcal.tags import FEASIBLE_UNITS, VISIT_RESOURCES, ParamRole, TriageTag, UnitId


def make_resource(capacity: int = 1, start: float = 0.0) -> tuple[simpy.Environment, ScheduledResource]:
    env = simpy.Environment(initial_time=start)
    resource = ScheduledResource(env, "X", CapacitySchedule.constant(capacity), trace=EventTrace())
    return env, resource


def random_scenario(base: ScenarioConfig, seed: int) -> ScenarioConfig:
    """``base`` with random arrival rates, seat capacities and routing probabilities."""
    rng = np.random.default_rng(seed)
    data = base.model_dump(mode="json")
    day_seats = {name: int(rng.integers(1, 5)) for name in VISIT_RESOURCES}
    data.update(
        horizon=24.0 + 72.0,
        warmup=24.0,
        start_day=int(rng.integers(0, 7)),
        rate_table=rng.uniform(0.0, 8.0, (7, 24)).round(3).tolist(),
        tag_probs_day={tag.value: float(rng.uniform(0.05, 1.0)) for tag in TriageTag},
        tag_probs_night={
            tag.value: float(rng.uniform(0.05, 1.0)) for tag in TriageTag if tag != TriageTag.WHITE
        },
        unit_probs={
            tag.value: {
                "day": {unit.value: float(rng.uniform(0.05, 1.0)) for unit in units},
                "night": {
                    unit.value: float(rng.uniform(0.05, 1.0)) for unit in units if unit != UnitId.MIU
                },
            }
            for tag, units in FEASIBLE_UNITS.items()
        },
        p_lwbs={tag.value: float(rng.uniform(0.0, 0.2)) for tag in TriageTag},
        p_removed_after_exams={
            tag.value: {unit.value: float(rng.uniform(0.0, 0.3)) for unit in units}
            for tag, units in FEASIBLE_UNITS.items()
        },
        p_transferred_given_removed=float(rng.uniform()),
        seats={
            name: {
                "default": int(rng.integers(0 if name == "MIU" else 1, 3)),
                "windows": [{"start_hour": 8, "end_hour": 20, "capacity": day_seats[name]}],
            }
            for name in VISIT_RESOURCES
        },
        surge_enabled=bool(rng.integers(0, 2)),
        surge_threshold=float(rng.uniform(1.0, 6.0)),
    )
    # White patients have no night route.
    del data["unit_probs"][TriageTag.WHITE.value]["night"]
    return ScenarioConfig.model_validate(data)


class TestCapacitySchedule:
    """Test suite for weekly capacity grids."""

    def test_mu_drops_at_eight_pm(self, scenario):
        schedule = CapacitySchedule(scenario.seats["MU"].capacity_grid(), scenario.start_day)
        assert schedule.capacity_at(19.5) == 3
        assert schedule.capacity_at(20.0) == 2
        assert schedule.next_change(10.0) == 20.0

    def test_miu_closed_on_sunday(self, scenario):
        schedule = CapacitySchedule(scenario.seats["MIU"].capacity_grid(), scenario.start_day)
        assert schedule.capacity_at(10.0) == 2
        assert schedule.capacity_at(6 * 24 + 10.0) == 0
        assert schedule.capacity_at(22.0) == 0

    def test_constant_never_changes(self):
        assert CapacitySchedule.constant(4).next_change(3.0) == np.inf

    def test_bad_grid(self):
        with pytest.raises(ValueError):
            CapacitySchedule(np.ones((24, 7), dtype=np.int64))


class TestScheduledResource:
    """Test suite for the priority/FIFO resource."""

    def test_immediate_grant(self):
        _, res = make_resource(2)
        req = res.seize(1, 0)
        assert req.granted
        assert req.waited == 0.0
        assert res.in_service == 1

    def test_priority_dominance(self):
        _, res = make_resource(1)
        res.seize(0, 0)
        low = res.seize(1, TriageTag.GREEN.priority)
        high = res.seize(2, TriageTag.RED.priority)
        res.release(0)
        assert high.granted
        assert not low.granted

    def test_fifo_within_class(self):
        env, res = make_resource(1)
        res.seize(0, 0)
        first = res.seize(1, 2)
        env.run(until=1.0)
        second = res.seize(2, 2)
        res.release(0)
        assert first.granted
        assert not second.granted
        res.release(1)
        assert second.granted
        assert second.waited == 0.0

    def test_double_seize_rejected(self):
        _, res = make_resource(1)
        res.seize(1, 0)
        with pytest.raises(EngineError):
            res.seize(1, 0)

    def test_release_without_holding(self):
        _, res = make_resource(1)
        with pytest.raises(EngineError):
            res.release(5)

    def test_capacity_decrease_does_not_preempt(self, scenario):
        env = simpy.Environment(initial_time=19.0)
        res = ScheduledResource(env, "MU", CapacitySchedule(scenario.seats["MU"].capacity_grid()), trace=EventTrace())
        env.process(res.watch_schedule())
        requests = [res.seize(i, 1) for i in range(4)]
        assert [r.granted for r in requests] == [True, True, True, False]
        env.run(until=20.5)
        assert res.in_service == 3
        res.release(0)
        assert not requests[3].granted
        res.release(1)
        assert requests[3].granted
        assert audit_trace(res.trace) == []

    def test_capacity_increase_grants_exactly_one(self):
        grid = np.ones((7, 24), dtype=np.int64)
        grid[0, 1] = 2
        env = simpy.Environment()
        res = ScheduledResource(env, "X", CapacitySchedule(grid), trace=EventTrace())
        env.process(res.watch_schedule())
        requests = [res.seize(i, 0) for i in range(4)]
        env.run(until=1.5)
        assert sum(r.granted for r in requests) == 2
        assert requests[1].grant_time == 1.0
        assert res.queue_length == 2

    def test_surge_opens_extra_seat(self):
        env = simpy.Environment()
        res = ScheduledResource(env, "SU", CapacitySchedule.constant(1), surge=SurgePolicy(4.0, 1))
        res.seize(0, 0)
        waiting = res.seize(1, 0)
        env.run(until=3.9)
        assert not waiting.granted
        env.run(until=4.1)
        assert waiting.granted
        assert waiting.grant_time == pytest.approx(4.0)


class TestAudits:
    """Test suite for trace and output audits."""

    def test_grant_without_enqueue(self):
        trace = EventTrace([TraceEvent(time=1.0, kind="GRANT", entity=3, resource="X", in_service=1, capacity=1)])
        assert len(audit_trace(trace)) == 1

    def test_over_capacity(self):
        trace = EventTrace(
            [
                TraceEvent(0.0, "ENQUEUE", 1, "X", enqueue_time=0.0, seq=0),
                TraceEvent(0.0, "GRANT", 1, "X", in_service=2, capacity=1, enqueue_time=0.0, seq=0),
            ],
        )
        assert any("capacity" in v for v in audit_trace(trace))

    def test_negative_census(self):
        log = {(TriageTag.GREEN, UnitId.MU): [(1.0, -1), (2.0, 1)]}
        assert audit_census(log)

    @pytest.mark.parametrize("case", range(50))
    def test_kernel_invariants_on_random_scenarios(self, short_scenario, reference_params, case):
        """Capacity safety, queue discipline, conservation and census hold on random scenarios."""
        cfg = random_scenario(short_scenario, case)
        rng = np.random.default_rng(1000 + case)
        params = ParamVector(
            {
                key: value * rng.uniform(0.5, 2.0) if key.role == ParamRole.SCALE else value
                for key, value in reference_params.values.items()
            },
        )
        out = run_replication(cfg, params, 0, case, trace=True)
        assert out.trace is not None
        assert len(out.trace) > 0
        assert audit_trace(out.trace) == []
        assert audit_conservation(out) == []
        assert audit_census(out.census_log) == []


class TestEngine:
    """Test suite for the event calendar wrapper."""

    def test_runs_until_horizon(self):
        engine = SimulationEngine(10.0)
        seen = []

        def ticker():
            while True:
                yield engine.timeout(3.0)
                seen.append(engine.now)

        engine.process(ticker())
        engine.run()
        assert seen == [3.0, 6.0, 9.0]
        assert engine.now == 10.0

    def test_simultaneous_events_in_schedule_order(self):
        engine = SimulationEngine(5.0)
        order = []

        def proc(name):
            yield engine.timeout(1.0)
            order.append(name)

        for name in "abc":
            engine.process(proc(name))
        engine.run()
        assert order == ["a", "b", "c"]


class TestReplications:
    """Test suite for the replication runner."""

    def test_deterministic(self, short_scenario, reference_params):
        a = run_replication(short_scenario, reference_params, 0, 99)
        b = run_replication(short_scenario, reference_params, 0, 99)
        assert a == b
        assert a.created > 0

    def test_replications_differ(self, short_scenario, reference_params):
        a, b = run_replications(short_scenario, reference_params, 2, 99)
        assert a.records != b.records

    def test_serial_equals_parallel(self, short_scenario, reference_params):
        serial = run_replications(short_scenario, reference_params, 4, 5)
        parallel = run_replications(short_scenario, reference_params, 4, 5, parallel=True, jobs=2)
        assert serial == parallel

    def test_window_membership(self, short_scenario, reference_params):
        out = run_replication(short_scenario, reference_params, 0, 3)
        start, end = short_scenario.window
        assert all(start <= rec.t0 < end for rec in out.records)
        assert sum(out.patient_counts.values()) == len(out.records)

    def test_common_random_numbers(self, short_scenario, reference_params, uniform_params):
        """Arrivals and routing do not depend on service-time parameters."""
        a = run_replication(short_scenario, reference_params, 0, 17)
        b = run_replication(short_scenario, uniform_params, 0, 17)
        assert [(r.id, r.tag, r.unit, r.t0) for r in a.records] == [(r.id, r.tag, r.unit, r.t0) for r in b.records]
        assert a.created == b.created

    def test_invalid_count(self, short_scenario, reference_params):
        with pytest.raises(ValueError):
            run_replications(short_scenario, reference_params, 0, 1)
