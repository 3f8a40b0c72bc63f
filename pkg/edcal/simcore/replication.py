"""Replication runner.

Replication r draws every random number from substreams of
RngStream(base_seed, (r,)), so its output depends only on
(cfg, params, r, base_seed), whether it runs serially or in a worker process.
"""

import logging
from collections import Counter
from concurrent.futures import Executor, ProcessPoolExecutor
from functools import partial

from ..distributions import RngStream, nhpp_arrivals
from ..edmodel.kpis import census_log_from_records, extract_kpis, to_period_records
from ..edmodel.trajectory import N_DRAWS, Patient, build_engine, simulate_patient
from ..models.params import ParamVector, decision_keys
from ..models.patient import Outcome, PatientRecord
from ..models.results import ReplicationOutput
from ..models.scenario import ScenarioConfig

logger = logging.getLogger(__name__)

ARRIVAL_STREAM = 0
PATIENT_STREAM = 1


def in_window(record: PatientRecord, window: tuple[float, float]) -> bool:
    """Window membership is decided by triage start (arrival for patients never triaged)."""
    key = record.t0 if record.t0 is not None else record.arrival
    return key is not None and window[0] <= key < window[1]


def run_replication(
    cfg: ScenarioConfig,
    params: ParamVector,
    rep_index: int,
    base_seed: int,
    trace: bool = False,
) -> ReplicationOutput:
    """Simulate one replication over [0, horizon).

    Args:
    ----
        cfg: Validated scenario
        params: Service-time parameters; must cover every decision variable
        rep_index: Replication number, selects the random substream
        base_seed: Seed shared by all replications of a run
        trace: Record the kernel event trace for audits

    Returns:
    -------
        Statistics of the patients whose triage starts in [warmup, horizon).
        KPIs are measured on the records placed in dataset period time
        (see ScenarioConfig.period_frame) at dataset clock precision, so a
        synthetic dataset built from this replication yields the same values.

    """
    params.require(decision_keys())

    stream = RngStream(base_seed, (rep_index,))
    arrivals = nhpp_arrivals(cfg.rates(), cfg.start_day, cfg.horizon, stream.spawn(ARRIVAL_STREAM))
    draws = stream.spawn(PATIENT_STREAM).uniform((arrivals.size, N_DRAWS))

    engine = build_engine(cfg, trace=trace)
    patients = [
        Patient(i, float(t), draws[i], PatientRecord(id=i)) for i, t in enumerate(arrivals)
    ]
    for patient in patients:
        engine.process(simulate_patient(patient, cfg, params, engine))
    engine.run()

    outcome_counts = Counter(p.record.outcome for p in patients)
    window = cfg.window
    records = [p.record for p in patients if p.record.tag is not None and in_window(p.record, window)]
    counts = Counter(rec.cell for rec in records)

    output = ReplicationOutput(
        rep_index=rep_index,
        kpis=extract_kpis(to_period_records(records, *cfg.period_frame(rep_index)), mode="simulated"),
        patient_counts=dict(counts),
        census_log=census_log_from_records(records),
        records=records,
        outcome_counts=dict(outcome_counts),
        created=len(patients),
        trace=engine.trace,
    )
    logger.debug(
        "rep %d: %d arrivals, %d in window, %d still in system",
        rep_index,
        len(patients),
        len(records),
        outcome_counts.get(Outcome.IN_SYSTEM, 0),
    )
    return output


def run_replications(
    cfg: ScenarioConfig,
    params: ParamVector,
    n_reps: int,
    base_seed: int,
    parallel: bool = False,
    jobs: int | None = None,
    executor: Executor | None = None,
    trace: bool = False,
) -> list[ReplicationOutput]:
    """Run replications 0..n_reps-1; the result is identical serial or parallel.

    Args:
    ----
        cfg: Validated scenario
        params: Service-time parameters
        n_reps: Number of replications (>= 1)
        base_seed: Seed shared by all replications
        parallel: Use worker processes
        jobs: Worker count when a pool is created here
        executor: Reuse an existing pool (implies parallel)
        trace: Record kernel event traces

    """
    if n_reps < 1:
        raise ValueError(f"n_reps must be at least 1, got {n_reps}")
    params.require(decision_keys())
    task = partial(run_replication, cfg, params, base_seed=base_seed, trace=trace)
    indices = range(n_reps)

    if executor is not None:
        return list(executor.map(task, indices))
    if parallel and n_reps > 1 and (jobs is None or jobs > 1):
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(task, indices))
    return [task(r) for r in indices]
