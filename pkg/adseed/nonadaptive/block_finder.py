import logging

from dataclasses import dataclass
from typing import FrozenSet, List, Optional, Sequence, Tuple

import numpy as np

from ..core.config import GetConfig
from ..core.error import CapExceededError, InputError
from ..core.instance import Instance
from ..core.internal import *
from ..core.policy import NonAdaptivePolicy
from ..evaluation.estimate import Estimate
from ..evaluation.evaluator import METHOD_AUTO, ValueNonAdaptiveBatch
from ..functions.oracle import Oracle
from ..utils.stream import Stream, CreateStream
from .nonadaptive_api import *

logger = logging.getLogger("adseed.nonadaptive")

Candidate = Tuple[str, FrozenSet[str]]


"""
" class NonAdaptiveBlock. a first-stage node x and neighbors B of x; cost 1 + C(B).
"""
@dataclass(frozen=True)
class NonAdaptiveBlock:
    x: str
    second: FrozenSet[str]
    marginal: Estimate
    cost: float

    @property
    def density(self) -> float:
        return self.marginal.mean / self.cost


def BlockKey(x: str, second: FrozenSet[str]) -> Tuple[str, Tuple[str, ...]]:
    return (x, tuple(sorted(second)))


"""
" class BlockFinder
" Scores candidate blocks by marginal density F_T(B) / (1 + C(B)) against
" a state (S, T). All candidates of one call share the same realizations.
"""
class BlockFinder:
    def __init__(self, inst: Instance, oracle: Oracle, epsilon: float, samples: int = None,
                 stream: Stream = None, method: str = METHOD_AUTO):
        if not epsilon > 0:
            raise InputError(f"epsilon must be positive (got {epsilon})")
        self._inst = inst
        self._oracle = oracle
        self.__epsilon = float(epsilon)
        self.__samples = GetConfig().block_samples if samples is None else int(samples)
        self.__stream = CreateStream(0) if stream is None else stream
        self.__method = method
        self.__calls = 0

    def Epsilon(self) -> float:
        return self.__epsilon

    def Find(self, state: NonAdaptivePolicy) -> Optional[NonAdaptiveBlock]:
        raise NotImplementedError

    def _NextStream(self) -> Stream:
        self.__calls += 1
        return self.__stream.Derive(self.__calls)

    def _Best(self, state: NonAdaptivePolicy, candidates: Sequence[Candidate]) -> Optional[NonAdaptiveBlock]:
        if not candidates:
            return None
        stream = self._NextStream()
        inst, oracle = self._inst, self._oracle

        base = oracle.Mask(state.second)
        masks = np.repeat(base[None, :], len(candidates) + 1, axis=0)
        for i, (_, second) in enumerate(candidates):
            masks[i + 1, oracle.Indices(second)] = True

        means, _, exact = ValueNonAdaptiveBatch(inst, oracle, masks, self.__method, self.__samples, stream)
        marginals = np.maximum(means[1:] - means[0], 0.0)
        costs = np.array([1.0 + inst.ExpectedCost(second) for _, second in candidates])
        densities = marginals / costs

        best = None
        for i in sorted(range(len(candidates)), key=lambda i: (costs[i], BlockKey(*candidates[i]))):
            if best is None or densities[i] > densities[best] + DENSITY_TIE_TOL:
                best = i

        x, second = candidates[best]
        if exact:
            marginal = Estimate(float(marginals[best]), 0.0, 0, True)
        else:
            marginal = self.__Reestimate(state, second, stream.Derive(0))
        logger.debug("[BlockFinder] %d candidates, best %s density %.6g", len(candidates),
                     BlockKey(x, second), marginal.mean / costs[best])
        return NonAdaptiveBlock(x, second, marginal, float(costs[best]))

    def __Reestimate(self, state: NonAdaptivePolicy, second: FrozenSet[str], stream: Stream) -> Estimate:
        samples = WINNER_SAMPLE_FACTOR * self.__samples
        base = self._oracle.Mask(state.second)
        grown = base.copy()
        grown[self._oracle.Indices(second)] = True
        means, errors, _ = ValueNonAdaptiveBatch(self._inst, self._oracle, np.stack([base, grown]),
                                                 self.__method, samples, stream)
        # same realizations for both rows, so the difference is estimated directly
        return Estimate(max(0.0, float(means[1] - means[0])), float(np.hypot(errors[0], errors[1])), samples, False)


def EnumerateSubsets(ids: Sequence[str], costs: Sequence[float], limit: float, cap: int,
                     found: List[FrozenSet[str]]) -> None:
    """
    Appends to `found` every nonempty subset of ids whose total cost is at
    most limit; raises once more than cap subsets have been collected.
    """
    stack = [(0, 0.0, ())]
    while stack:
        start, spent, chosen = stack.pop()
        for i in range(len(ids) - 1, start - 1, -1):
            total = spent + costs[i]
            if total > limit + ADSEED_BUDGET_TOL:
                continue
            subset = chosen + (ids[i],)
            found.append(frozenset(subset))
            if len(found) > cap:
                raise CapExceededError(f"more than {cap} candidate blocks", ADSEED_ERR_CAP_CANDIDATES)
            stack.append((i + 1, total, subset))


"""
" class EnumBlockFinder
" Every x in X with every B <= N(x) \\ T of expected size at most 1/epsilon.
"""
class EnumBlockFinder(BlockFinder):
    def __init__(self, inst: Instance, oracle: Oracle, epsilon: float, samples: int = None,
                 stream: Stream = None, method: str = METHOD_AUTO, cap: int = None):
        super().__init__(inst, oracle, epsilon, samples, stream, method)
        self.__cap = GetConfig().subset_cap if cap is None else int(cap)

    def Candidates(self, state: NonAdaptivePolicy) -> List[Candidate]:
        candidates = []
        for x in self._inst.x_nodes:
            ys = sorted(y for y in self._inst.neighbors.get(x, ()) if y not in state.second)
            found = []
            EnumerateSubsets(ys, [self._inst.probabilities[y] for y in ys], 1.0 / self.Epsilon(),
                             self.__cap - len(candidates), found)
            candidates.extend((x, second) for second in found)
        return candidates

    def Find(self, state: NonAdaptivePolicy) -> Optional[NonAdaptiveBlock]:
        return self._Best(state, self.Candidates(state))


"""
" function FindBlockEnum
"""
def FindBlockEnum(inst: Instance, oracle: Oracle, state: NonAdaptivePolicy, epsilon: float, samples: int = None,
                  stream: Stream = None, cap: int = None) -> Optional[NonAdaptiveBlock]:
    return EnumBlockFinder(inst, oracle, epsilon, samples, stream, cap=cap).Find(state)
