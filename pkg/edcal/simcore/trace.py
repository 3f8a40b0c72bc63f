"""Event trace recorded by scheduled resources."""

from dataclasses import dataclass, field
from pathlib import Path

import pandas as pd

from ..types import TraceKind


@dataclass(frozen=True)
class TraceEvent:
    """One kernel event.

    ``in_service`` and ``capacity`` are the values right after the event.
    ``enqueue_time`` is set on ENQUEUE and GRANT events.
    """

    time: float
    kind: TraceKind
    entity: int
    resource: str
    priority: int = 0
    in_service: int = 0
    capacity: int = 0
    enqueue_time: float | None = None
    seq: int = -1


@dataclass
class EventTrace:
    """Append-only list of TraceEvents in dispatch order."""

    events: list[TraceEvent] = field(default_factory=list)

    def record(self, event: TraceEvent) -> None:
        self.events.append(event)

    def for_resource(self, name: str) -> list[TraceEvent]:
        return [e for e in self.events if e.resource == name]

    def resources(self) -> list[str]:
        return sorted({e.resource for e in self.events})

    def __len__(self) -> int:
        return len(self.events)

    def to_frame(self) -> pd.DataFrame:
        columns = ["time", "kind", "entity", "resource", "priority", "in_service", "capacity"]
        return pd.DataFrame(
            [(e.time, e.kind, e.entity, e.resource, e.priority, e.in_service, e.capacity) for e in self.events],
            columns=columns,
        )

    def dump(self, path: Path) -> None:
        """Write the trace as tab-separated text, one line per event."""
        self.to_frame().to_csv(path, sep="\t", index=False, float_format="%.6f")
