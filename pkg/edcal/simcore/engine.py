"""Thin wrapper around a simpy environment used as the event calendar.

simpy dispatches events in (time, priority, insertion id) order, so
simultaneous events run in the order they were scheduled.
"""

import logging
from collections.abc import Generator
from typing import Any

import simpy

from .resources import CapacitySchedule, ScheduledResource, SurgePolicy
from .trace import EventTrace

logger = logging.getLogger(__name__)


class SimulationEngine:
    """Event calendar plus the named resources of one replication."""

    def __init__(self, horizon: float, trace: bool = False) -> None:
        self.env = simpy.Environment()
        self.horizon = horizon
        self.trace = EventTrace() if trace else None
        self.resources: dict[str, ScheduledResource] = {}

    @property
    def now(self) -> float:
        return float(self.env.now)

    def add_resource(
        self,
        name: str,
        schedule: CapacitySchedule,
        surge: SurgePolicy | None = None,
    ) -> ScheduledResource:
        resource = ScheduledResource(self.env, name, schedule, trace=self.trace, surge=surge)
        self.resources[name] = resource
        self.env.process(resource.watch_schedule())
        return resource

    def resource(self, name: str) -> ScheduledResource:
        return self.resources[name]

    def timeout(self, delay: float) -> simpy.Timeout:
        return self.env.timeout(delay)

    def process(self, generator: Generator[simpy.Event, Any, Any]) -> simpy.Process:
        return self.env.process(generator)

    def run(self) -> None:
        """Run until the horizon; entities still active are truncated."""
        self.env.run(until=self.horizon)
        logger.debug("engine stopped at t=%.2f", self.env.now)
