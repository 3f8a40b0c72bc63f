"""Invariant audits over traces and replication outputs.

Each audit returns a list of human-readable violations; an empty list means
the invariant holds.
"""

from ..models.patient import Outcome
from ..models.results import CensusLog, ReplicationOutput
from .trace import EventTrace


def audit_trace(trace: EventTrace) -> list[str]:
    """Check capacity safety and queue discipline for every resource."""
    violations: list[str] = []
    for name in trace.resources():
        waiting: dict[int, tuple[int, float, int]] = {}
        holding: set[int] = set()
        for e in trace.for_resource(name):
            if e.kind == "ENQUEUE":
                waiting[e.entity] = (-e.priority, e.enqueue_time or 0.0, e.seq)
            elif e.kind == "GRANT":
                key = waiting.pop(e.entity, None)
                if key is None:
                    violations.append(f"{name}: grant to {e.entity} at t={e.time:.4f} without enqueue")
                    continue
                if waiting and min(waiting.values()) < key:
                    violations.append(
                        f"{name}: entity {e.entity} granted at t={e.time:.4f} ahead of a higher-ranked waiter",
                    )
                if e.in_service > e.capacity:
                    violations.append(
                        f"{name}: in_service {e.in_service} > capacity {e.capacity} at t={e.time:.4f}",
                    )
                holding.add(e.entity)
            elif e.kind == "RELEASE":
                if e.entity not in holding:
                    violations.append(f"{name}: release by non-holder {e.entity} at t={e.time:.4f}")
                holding.discard(e.entity)
    return violations


def audit_conservation(output: ReplicationOutput) -> list[str]:
    """created = removed + discharged + still in system."""
    accounted = sum(output.outcome_counts.values())
    if accounted != output.created:
        return [f"created {output.created} entities but outcomes account for {accounted}"]
    if output.outcome_counts.get(Outcome.IN_SYSTEM, 0) < 0:
        return ["negative in-system count"]
    return []


def audit_census(census_log: CensusLog) -> list[str]:
    """Partial sums of every census log stay non-negative."""
    violations: list[str] = []
    for (tag, unit), entries in census_log.items():
        level = 0
        for time, delta in sorted(entries, key=lambda e: (e[0], -e[1])):
            level += delta
            if level < 0:
                violations.append(f"{tag.value}/{unit.value}: census negative at t={time:.4f}")
                break
    return violations
