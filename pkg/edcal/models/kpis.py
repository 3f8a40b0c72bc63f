"""Duration samples per (tag, unit, time difference)."""

from collections import defaultdict
from dataclasses import dataclass, field

import numpy as np

from ..tags import FOLDED_PAIRS, TriageTag, UnitId
from ..types import TimeDiff

KpiIndex = tuple[TriageTag, UnitId, TimeDiff]


@dataclass
class KpiSampleSet:
    """DOT/DIT samples in hours, keyed by (tag, unit, time difference).

    ``segments`` optionally splits the samples into observation periods of
    equal length. A segmented set is scored the way simulation replications
    are: one ECDF, mean and std per segment, then averaged.
    """

    samples: dict[KpiIndex, list[float]] = field(default_factory=lambda: defaultdict(list))
    segments: list["KpiSampleSet"] = field(default_factory=list)

    def add(self, tag: TriageTag, unit: UnitId, kind: TimeDiff, value: float) -> None:
        self.samples.setdefault((tag, unit, kind), []).append(value)

    def get(self, tag: TriageTag, unit: UnitId, kind: TimeDiff) -> np.ndarray:
        return np.asarray(self.samples.get((tag, unit, kind), []), dtype=float)

    def count(self, index: KpiIndex) -> int:
        return len(self.samples.get(index, []))

    def indices(self) -> list[KpiIndex]:
        return [k for k, v in self.samples.items() if v]

    def is_empty(self) -> bool:
        return not any(self.samples.values())

    def parts(self) -> list["KpiSampleSet"]:
        """The segments, or the set itself when it is not segmented."""
        return self.segments or [self]

    def folded(self) -> "KpiSampleSet":
        """Merge folded cells (Red/RA) into the cell owning their parameters."""
        merged: dict[KpiIndex, list[float]] = defaultdict(list)
        for (tag, unit, kind), values in sorted(self.samples.items(), key=_index_order):
            ftag, funit = FOLDED_PAIRS.get((tag, unit), (tag, unit))
            merged[(ftag, funit, kind)].extend(values)
        return KpiSampleSet(merged, [s.folded() for s in self.segments])

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, KpiSampleSet):
            return NotImplemented
        mine = {k: v for k, v in self.samples.items() if v}
        theirs = {k: v for k, v in other.samples.items() if v}
        return mine == theirs and self.segments == other.segments

    def __repr__(self) -> str:
        total = sum(len(v) for v in self.samples.values())
        split = f", {len(self.segments)} segments" if self.segments else ""
        return f"KpiSampleSet({len(self.indices())} cells, {total} samples{split})"


def _index_order(item: tuple[KpiIndex, list[float]]) -> tuple[str, str, str]:
    tag, unit, kind = item[0]
    return tag.value, unit.value, kind
