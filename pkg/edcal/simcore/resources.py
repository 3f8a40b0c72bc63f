"""Resources with schedule-varying capacity and a priority/FIFO queue."""

import heapq
import logging
import math
from dataclasses import dataclass, field

import numpy as np
import simpy

from ..distributions import DAYS_PER_WEEK, HOURS_PER_DAY
from ..errors import EngineError
from .trace import EventTrace, TraceEvent

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class CapacitySchedule:
    """Capacity per (weekday, hour) over a repeating week."""

    grid: np.ndarray
    start_day: int = 0

    def __post_init__(self) -> None:
        if self.grid.shape != (DAYS_PER_WEEK, HOURS_PER_DAY) or np.any(self.grid < 0):
            raise ValueError("capacity grid must be 7x24 with non-negative entries")

    @classmethod
    def constant(cls, capacity: int, start_day: int = 0) -> "CapacitySchedule":
        return cls(np.full((DAYS_PER_WEEK, HOURS_PER_DAY), capacity, dtype=np.int64), start_day)

    def capacity_at(self, t: float) -> int:
        day = (self.start_day + int(t // HOURS_PER_DAY)) % DAYS_PER_WEEK
        return int(self.grid[day, int(t) % HOURS_PER_DAY])

    def next_change(self, t: float) -> float:
        """First whole hour after ``t`` where capacity differs from capacity_at(t)."""
        current = self.capacity_at(t)
        hour = math.floor(t) + 1
        for k in range(DAYS_PER_WEEK * HOURS_PER_DAY):
            if self.capacity_at(hour + k) != current:
                return float(hour + k)
        return math.inf


@dataclass(frozen=True)
class SurgePolicy:
    """Extra seats opened while the head of the queue has waited too long."""

    threshold: float
    extra_seats: int


@dataclass
class SeizeRequest:
    """A pending or granted claim on a resource."""

    entity: int
    priority: int
    enqueue_time: float
    seq: int
    event: simpy.Event
    granted: bool = False
    grant_time: float | None = None

    @property
    def waited(self) -> float | None:
        if self.grant_time is None:
            return None
        return self.grant_time - self.enqueue_time


@dataclass(eq=False)
class ScheduledResource:
    """A pool of identical seats whose size follows a weekly schedule.

    Waiting entities are ordered by (priority desc, enqueue time asc, sequence).
    Capacity decreases never preempt: entities in service finish normally and
    no new grant happens until in_service drops below the new capacity.
    """

    env: simpy.Environment
    name: str
    schedule: CapacitySchedule
    trace: EventTrace | None = None
    surge: SurgePolicy | None = None
    in_service: int = field(default=0, init=False)
    _queue: list[tuple[int, float, int, SeizeRequest]] = field(default_factory=list, init=False)
    _holders: dict[int, SeizeRequest] = field(default_factory=dict, init=False)
    _waiting: set[int] = field(default_factory=set, init=False)
    _seq: int = field(default=0, init=False)
    _surge_on: bool = field(default=False, init=False)

    def capacity(self, now: float | None = None) -> int:
        t = self.env.now if now is None else now
        extra = self.surge.extra_seats if (self.surge and self._surge_on) else 0
        return self.schedule.capacity_at(t) + extra

    @property
    def queue_length(self) -> int:
        return len(self._queue)

    def seize(self, entity: int, priority: int) -> SeizeRequest:
        """Request a seat; the returned request's event fires on grant.

        Grants immediately iff in_service < capacity(now); otherwise enqueues.
        """
        if entity in self._waiting or entity in self._holders:
            raise EngineError(f"entity {entity} already waiting on or holding {self.name}")
        now = self.env.now
        request = SeizeRequest(entity, priority, now, self._seq, self.env.event())
        self._seq += 1
        heapq.heappush(self._queue, (-priority, now, request.seq, request))
        self._waiting.add(entity)
        self._record("ENQUEUE", request)
        self._dispatch()
        if not request.granted and self.surge is not None:
            check = self.env.timeout(self.surge.threshold)
            check.callbacks.append(self._surge_check)
        return request

    def release(self, entity: int) -> None:
        """Free the seat held by ``entity`` and grant waiting entities if possible."""
        request = self._holders.pop(entity, None)
        if request is None:
            raise EngineError(f"entity {entity} releases {self.name} without holding it")
        self.in_service -= 1
        self._record("RELEASE", request)
        self._dispatch()

    def on_capacity_change(self) -> None:
        """React to a scheduled capacity boundary."""
        self._record_capacity()
        self._dispatch()

    def watch_schedule(self):
        """simpy process firing on_capacity_change at each schedule boundary."""
        while True:
            nxt = self.schedule.next_change(self.env.now)
            if math.isinf(nxt):
                return
            yield self.env.timeout(nxt - self.env.now)
            self.on_capacity_change()

    def _dispatch(self) -> None:
        while self._queue and self.in_service < self.capacity():
            _, _, _, request = heapq.heappop(self._queue)
            self._waiting.discard(request.entity)
            request.granted = True
            request.grant_time = self.env.now
            self.in_service += 1
            self._holders[request.entity] = request
            self._record("GRANT", request)
            request.event.succeed(request)
        if self._surge_on and not self._queue:
            self._surge_on = False
            self._record_capacity()

    def _surge_check(self, _event: simpy.Event) -> None:
        if self.surge is None or self._surge_on or not self._queue:
            return
        head = self._queue[0][3]
        if self.env.now - head.enqueue_time >= self.surge.threshold - 1e-9:
            logger.debug("%s: surge seats opened at t=%.3f", self.name, self.env.now)
            self._surge_on = True
            self._record_capacity()
            self._dispatch()

    def _record(self, kind, request: SeizeRequest) -> None:
        if self.trace is None:
            return
        self.trace.record(
            TraceEvent(
                time=self.env.now,
                kind=kind,
                entity=request.entity,
                resource=self.name,
                priority=request.priority,
                in_service=self.in_service,
                capacity=self.capacity(),
                enqueue_time=request.enqueue_time,
                seq=request.seq,
            ),
        )

    def _record_capacity(self) -> None:
        if self.trace is None:
            return
        self.trace.record(
            TraceEvent(
                time=self.env.now,
                kind="CAPACITY",
                entity=-1,
                resource=self.name,
                in_service=self.in_service,
                capacity=self.capacity(),
            ),
        )

    def __repr__(self) -> str:
        return f"ScheduledResource({self.name}, {self.in_service}/{self.capacity()}, queue={len(self._queue)})"
