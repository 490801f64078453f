import io
import csv

from dataclasses import dataclass, field
from typing import FrozenSet, List, Optional

TRACE_COLUMNS = ["iteration", "block", "marginal", "density", "cost", "value"]


"""
" class TraceEntry
"""
@dataclass(frozen=True)
class TraceEntry:
    iteration: int
    first: FrozenSet[str]
    second: FrozenSet[str]
    marginal: float
    density: float
    cost: float
    value: float
    # adaptive blocks choose their second stage per realization; only the budget is fixed
    budget: Optional[int] = None

    def BlockId(self) -> str:
        head = "{" + ",".join(sorted(self.first)) + "}"
        if self.budget is not None:
            return f"{head}:t={self.budget}"
        return head + ":{" + ",".join(sorted(self.second)) + "}"


"""
" class GreedyTrace
"""
@dataclass
class GreedyTrace:
    entries: List[TraceEntry] = field(default_factory=list)

    def Append(self, first, second, marginal: float, density: float, cost: float, value: float,
               budget: int = None) -> TraceEntry:
        entry = TraceEntry(len(self.entries), frozenset(first), frozenset(second), marginal, density, cost, value,
                           budget)
        self.entries.append(entry)
        return entry

    def Densities(self) -> List[float]:
        return [entry.density for entry in self.entries]

    def Costs(self) -> List[float]:
        return [entry.cost for entry in self.entries]

    def __len__(self):
        return len(self.entries)

    def RenderCsv(self) -> str:
        out = io.StringIO()
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(TRACE_COLUMNS)
        for entry in self.entries:
            writer.writerow([entry.iteration, entry.BlockId(), repr(entry.marginal), repr(entry.density),
                             repr(entry.cost), repr(entry.value)])
        return out.getvalue()
