import logging

from dataclasses import dataclass
from typing import FrozenSet, List, Optional, Tuple

import numpy as np

from ..core.config import GetConfig
from ..core.error import CapExceededError, InputError
from ..core.internal import *
from .concave import ConcaveSolution, SolveConcave
from .pipage import FractionalIndices, PipageRound
from .problem import SospProblem, ExactObjective, ExactObjectiveBatch
from .sosp_api import *

logger = logging.getLogger("adseed.sosp")


"""
" class SospSolution
"""
@dataclass
class SospSolution:
    chosen: FrozenSet[str]
    value: float
    concave: Optional[ConcaveSolution] = None
    # the item left fractional by rounding, when the caller resolves it
    residual: Optional[str] = None

    def Cost(self, problem: SospProblem) -> float:
        index = {y: i for i, y in enumerate(problem.items)}
        return float(sum(problem.p[index[y]] for y in self.chosen))


def _Indicator(problem: SospProblem, selected) -> np.ndarray:
    x = np.zeros(problem.Size())
    idx = list(selected)
    x[idx] = problem.p[idx]
    return x


"""
" function SospSolve
" Concave relaxation, pipage rounding, then the leftover fractional item:
"   fit   - kept only if the budget allows; leftover budget goes to the
"           best-marginal items that still fit
"   keep  - kept, so the cost may pass k by one item of probability <= delta
"   defer - the integral part is returned and the item is reported as
"           `residual` for the caller to resolve
"""
def SospSolve(problem: SospProblem, iters: int = None, tol: float = None,
              residual: str = RESIDUAL_FIT) -> SospSolution:
    if residual not in RESIDUAL_MODES:
        raise InputError(f"unknown residual mode '{residual}', expected one of {list(RESIDUAL_MODES)}",
                         ADSEED_ERR_INPUT_PARAMETER)
    concave = SolveConcave(problem, iters, tol)
    rounded = PipageRound(problem, concave.q)
    q = np.array([rounded.q[y] for y in problem.items])

    chosen = set(int(i) for i in np.flatnonzero(q >= problem.p - PIPAGE_TOL))
    fractional = FractionalIndices(q, problem.p)
    left = int(fractional[0]) if len(fractional) else None

    if residual == RESIDUAL_DEFER:
        value = ExactObjective(problem, _Indicator(problem, chosen))
        return SospSolution(frozenset(problem.Ids(sorted(chosen))), value, concave,
                            None if left is None else problem.items[left])

    if left is not None and (residual == RESIDUAL_KEEP or _Fits(problem, chosen | {left})):
        chosen.add(left)
    if residual == RESIDUAL_FIT:
        chosen = _GreedyFill(problem, chosen)
    value = ExactObjective(problem, _Indicator(problem, chosen))
    logger.debug("[SospSolve] %s: %d of %d items, relaxed %.6g, exact %.6g", residual, len(chosen), problem.Size(),
                 concave.objective, value)
    return SospSolution(frozenset(problem.Ids(sorted(chosen))), value, concave)


def _Fits(problem: SospProblem, chosen) -> bool:
    spent = float(problem.p[list(chosen)].sum()) if chosen else 0.0
    return spent <= problem.k + ADSEED_BUDGET_TOL


def _GreedyFill(problem: SospProblem, chosen: set) -> set:
    chosen = set(chosen)
    while True:
        options = [i for i in range(problem.Size()) if i not in chosen and _Fits(problem, chosen | {i})]
        if not options:
            return chosen
        rows = np.stack([_Indicator(problem, chosen)] + [_Indicator(problem, chosen | {i}) for i in options])
        values = ExactObjectiveBatch(problem, rows)
        best = int(np.argmax(values[1:]))
        if values[best + 1] <= values[0] + ADSEED_BUDGET_TOL:
            return chosen
        chosen.add(options[best])


"""
" function SospBruteforce
" Exact argmax over every item set with sum(p) <= k.
"""
def SospBruteforce(problem: SospProblem, cap: int = None) -> Tuple[FrozenSet[str], float]:
    cap = GetConfig().subset_cap if cap is None else cap
    sets = FeasibleSets(problem, cap)
    rows = np.stack([_Indicator(problem, s) for s in sets])
    values = ExactObjectiveBatch(problem, rows)
    best = 0
    for i in range(1, len(sets)):
        if values[i] > values[best] + ADSEED_BUDGET_TOL:
            best = i
    logger.debug("[SospBruteforce] %d feasible sets, best %.12g", len(sets), values[best])
    return frozenset(problem.Ids(sets[best])), float(values[best])


def FeasibleSets(problem: SospProblem, cap: int) -> List[Tuple[int, ...]]:
    # depth-first in index order, the empty set first
    found = [()]
    stack = [(0, 0.0, ())]
    while stack:
        start, spent, chosen = stack.pop()
        for i in range(problem.Size() - 1, start - 1, -1):
            total = spent + problem.p[i]
            if total > problem.k + ADSEED_BUDGET_TOL:
                continue
            subset = chosen + (i,)
            found.append(subset)
            if len(found) > cap:
                raise CapExceededError(f"more than {cap} feasible SOSP sets", ADSEED_ERR_CAP_SUBSETS)
            stack.append((i + 1, total, subset))
    return found
