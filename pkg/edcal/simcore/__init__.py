"""Discrete-event kernel: calendar, scheduled resources, traces and audits.

The replication runner lives in ``edcal.simcore.replication``; it is not
re-exported here because it depends on the ED trajectory logic.
"""

from .audit import audit_census, audit_conservation, audit_trace
from .engine import SimulationEngine
from .resources import CapacitySchedule, ScheduledResource, SeizeRequest, SurgePolicy
from .trace import EventTrace, TraceEvent

__all__ = [
    "CapacitySchedule",
    "EventTrace",
    "ScheduledResource",
    "SeizeRequest",
    "SimulationEngine",
    "SurgePolicy",
    "TraceEvent",
    "audit_census",
    "audit_conservation",
    "audit_trace",
]
