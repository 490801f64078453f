import math
import logging

from typing import List, Optional

import numpy as np

from ..core.config import GetConfig
from ..core.error import InputError
from ..core.instance import Instance
from ..core.internal import *
from ..core.policy import NonAdaptivePolicy
from ..evaluation.evaluator import METHOD_AUTO
from ..functions.oracle import Oracle
from ..nonadaptive.block_finder import BlockFinder, Candidate, NonAdaptiveBlock, EnumerateSubsets
from ..utils.stream import Stream
from ..utils.thread import ParallelMap
from .problem import CreateSospProblem
from .solver import SospSolve
from .sosp_api import *

logger = logging.getLogger("adseed.sosp")


def BudgetGrid(step: float, limit: float) -> List[float]:
    count = int(math.floor(limit / step + ADSEED_BUDGET_TOL))
    return [step * (i + 1) for i in range(count)]


"""
" class MrsBlockFinder
" Block search for matroid rank sums with mixed probabilities. Neighbors
" with p >= delta are enumerated; for every enumerated part H and every
" budget on the grid {eps'', 2 eps'', ...} the small-probability neighbors
" are chosen by the SOSP solver. The rounding residual is kept or dropped
" by comparing block densities, so a block may exceed 1/eps' by delta.
"""
class MrsBlockFinder(BlockFinder):
    def __init__(self, inst: Instance, oracle: Oracle, epsilon: float, samples: int = None,
                 stream: Stream = None, method: str = METHOD_AUTO, cap: int = None,
                 iters: int = BLOCK_FW_ITERS, tol: float = BLOCK_FW_TOL):
        if not oracle.HasClosedForm():
            raise InputError(f"{type(oracle).__name__} is not a matroid rank sum with a closed form",
                             ADSEED_ERR_INPUT_FUNCTION)
        # blocks are sized by eps' = epsilon / 8, so the greedy reserves 3/eps'
        super().__init__(inst, oracle, epsilon / SCHEDULE_DIVISOR, samples, stream, method)
        self.__delta = epsilon / SCHEDULE_DIVISOR
        self.__step = epsilon / SCHEDULE_DIVISOR
        self.__cap = GetConfig().subset_cap if cap is None else int(cap)
        self.__iters = iters
        self.__tol = tol

    def Delta(self) -> float:
        return self.__delta

    def Candidates(self, state: NonAdaptivePolicy) -> List[Candidate]:
        inst, oracle = self._inst, self._oracle
        limit = 1.0 / self.Epsilon()
        baseX = np.where(oracle.Mask(state.second), inst.p, 0.0)

        candidates = set()
        for x in inst.x_nodes:
            ys = sorted(y for y in inst.neighbors.get(x, ()) if y not in state.second)
            high = [y for y in ys if inst.probabilities[y] >= self.__delta]
            low = [y for y in ys if inst.probabilities[y] < self.__delta]

            parts = [frozenset()]
            EnumerateSubsets(high, [inst.probabilities[y] for y in high], limit,
                             self.__cap - len(candidates), parts)
            for part in parts:
                if part:
                    candidates.add((x, part))
                if not low:
                    continue
                room = limit - inst.ExpectedCost(part)
                lowCost = inst.ExpectedCost(low)
                grid = [b for b in BudgetGrid(self.__step, room) if b < lowCost + self.__step]
                partX = baseX.copy()
                partX[oracle.Indices(part)] = inst.p[oracle.Indices(part)]
                lowP = [inst.probabilities[y] for y in low]

                def solve(budget, part=part, partX=partX, low=low, lowP=lowP):
                    problem = CreateSospProblem(oracle, low, lowP, budget, partX)
                    return SospSolve(problem, self.__iters, self.__tol, RESIDUAL_DEFER)

                for solution in ParallelMap(solve, grid, GetConfig().threads):
                    if solution.chosen:
                        candidates.add((x, part | solution.chosen))
                    if solution.residual is not None:
                        candidates.add((x, part | solution.chosen | {solution.residual}))

        logger.debug("[MrsBlockFinder] %d candidate blocks", len(candidates))
        return sorted(candidates, key=lambda c: (c[0], sorted(c[1])))

    def Find(self, state: NonAdaptivePolicy) -> Optional[NonAdaptiveBlock]:
        return self._Best(state, self.Candidates(state))
