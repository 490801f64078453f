import math
import itertools
import logging

from dataclasses import dataclass, field
from typing import Dict, FrozenSet, List, Optional, Sequence, Tuple

import numpy as np

from ..core.config import GetConfig
from ..core.error import CapExceededError, InputError
from ..core.instance import Instance, Realization, EnumerateRealizationMatrix
from ..core.internal import *
from ..core.policy import NonAdaptivePolicy, CreateNonAdaptivePolicy, EMPTY_NONADAPTIVE
from ..evaluation.evaluator import METHOD_AUTO, ValueNonAdaptiveBatch
from ..evaluation.executor import AdaptiveExecutor
from ..evaluation.second_stage import SECOND_STAGE_EXACT, SelectBatch
from ..functions.oracle import Oracle
from ..utils.stream import Stream

logger = logging.getLogger("adseed.oracle")

# feasible (S, T) pairs the non-adaptive brute force may visit
NONADAPTIVE_PAIR_CAP = 1_000_000


"""
" class OracleReport
"""
@dataclass
class OracleReport:
    opt_adaptive: float
    opt_nonadaptive: Optional[float]
    best_first_stage: FrozenSet[str]
    per_realization_choices: Optional[Dict[Realization, FrozenSet[str]]] = None
    best_nonadaptive: Optional[NonAdaptivePolicy] = None

    def ToDict(self) -> dict:
        result = {
            "opt_adaptive": self.opt_adaptive,
            "opt_nonadaptive": self.opt_nonadaptive,
            "best_first_stage": sorted(self.best_first_stage),
        }
        if self.best_nonadaptive is not None:
            result["best_nonadaptive"] = {"first": sorted(self.best_nonadaptive.first),
                                          "second": sorted(self.best_nonadaptive.second)}
        if self.per_realization_choices is not None:
            result["per_realization_choices"] = [
                {"realization": sorted(r.present), "choice": sorted(choice)}
                for r, choice in sorted(self.per_realization_choices.items(),
                                        key=lambda item: (len(item[0].present), sorted(item[0].present)))
            ]
        return result


def IntegralBudget(k: float) -> int:
    rounded = round(k)
    if abs(k - rounded) > ADSEED_BUDGET_TOL:
        raise InputError(f"brute force needs an integral budget (got {k})", ADSEED_ERR_INPUT_PARAMETER)
    return int(rounded)


def CheckBruteforceLimits(inst: Instance, maxX: int = None, maxNeighbors: int = None):
    config = GetConfig()
    maxX = config.oracle_max_x if maxX is None else maxX
    maxNeighbors = config.oracle_max_neighbors if maxNeighbors is None else maxNeighbors
    if len(inst.x_nodes) > maxX or len(inst.ground) > maxNeighbors:
        raise CapExceededError(
            f"brute force is limited to |X| <= {maxX} and |N(X)| <= {maxNeighbors} "
            f"(got {len(inst.x_nodes)} and {len(inst.ground)})", ADSEED_ERR_CAP_BRUTEFORCE)


def FirstStageSets(inst: Instance, size: int):
    # by size, then in x_nodes order
    for s in range(0, min(size, len(inst.x_nodes)) + 1):
        for first in itertools.combinations(inst.x_nodes, s):
            yield first


"""
" class AdaptiveBruteforce
" Optimal adaptive value of a fixed first stage S: every realization of N(S)
" gets its best second stage of size at most k - |S|. Results are memoized
" per (N(S), budget) since different S often share a neighborhood.
"""
class AdaptiveBruteforce:
    def __init__(self, inst: Instance, oracle: Oracle):
        self.__inst = inst
        self.__oracle = oracle
        self.__memo = {}

    def Solve(self, first: Sequence[str], t: int) -> Tuple[float, List[str], np.ndarray, np.ndarray]:
        """
        Returns (value, neighbor ids, realization bits, chosen masks); bits and
        masks have one row per realization of N(S).
        """
        inst, oracle = self.__inst, self.__oracle
        ids = sorted(inst.NeighborsOf(first), key=inst.index.get)
        key = (tuple(ids), t)
        if key in self.__memo:
            return self.__memo[key]

        bits, probs = EnumerateRealizationMatrix(inst, ids, limit=len(ids))
        cols = oracle.Indices(ids)
        base = np.zeros((bits.shape[0], oracle.Size()), dtype=bool)
        picks = SelectBatch(oracle, base, cols, bits, t, SECOND_STAGE_EXACT, cap=GetConfig().subset_cap)
        value = float(probs @ oracle.ValueBatch(picks)) if ids else 0.0
        self.__memo[key] = (value, ids, bits, picks)
        return self.__memo[key]


"""
" function OptAdaptiveBruteforce
"""
def OptAdaptiveBruteforce(inst: Instance, oracle: Oracle, k: float = None, witness: bool = False,
                          nonadaptive: bool = True) -> OracleReport:
    k = IntegralBudget(inst.budget if k is None else k)
    CheckBruteforceLimits(inst)

    solver = AdaptiveBruteforce(inst, oracle)
    bestValue, bestFirst = 0.0, ()
    for first in FirstStageSets(inst, k):
        value = solver.Solve(first, k - len(first))[0]
        if value > bestValue + ADSEED_BUDGET_TOL:
            bestValue, bestFirst = value, first
    logger.debug("[OptAdaptiveBruteforce] k=%d best S=%s value=%.12g", k, sorted(bestFirst), bestValue)

    choices = None
    if witness:
        _, ids, bits, picks = solver.Solve(bestFirst, k - len(bestFirst))
        choices = {}
        for row, pick in zip(bits, picks):
            realization = Realization(frozenset(y for y, bit in zip(ids, row) if bit))
            choices[realization] = inst.Ids(pick)

    report = OracleReport(bestValue, None, frozenset(bestFirst), choices)
    if nonadaptive:
        policy, value = OptNonAdaptiveBruteforce(inst, oracle, k)
        report.opt_nonadaptive = value
        report.best_nonadaptive = policy
    return report


"""
" function OptNonAdaptiveBruteforce
" argmax F(T) over S <= X, T <= N(S) with |S| + C(T) <= k.
"""
def OptNonAdaptiveBruteforce(inst: Instance, oracle: Oracle, k: float = None,
                             cap: int = NONADAPTIVE_PAIR_CAP) -> Tuple[NonAdaptivePolicy, float]:
    k = inst.budget if k is None else float(k)
    CheckBruteforceLimits(inst)

    # every second stage worth scoring, keyed by its ground mask, with the first S that reaches it
    seen: Dict[bytes, Tuple[Tuple[str, ...], np.ndarray]] = {}
    pairs = 0
    for first in FirstStageSets(inst, int(math.floor(k + ADSEED_BUDGET_TOL))):
        room = k - len(first)
        ids = sorted(inst.NeighborsOf(first), key=inst.index.get)
        p = np.array([inst.probabilities[y] for y in ids])
        for r in range(0, len(ids) + 1):
            for combo in itertools.combinations(range(len(ids)), r):
                if p[list(combo)].sum() > room + ADSEED_BUDGET_TOL:
                    continue
                pairs += 1
                if pairs > cap:
                    raise CapExceededError(f"more than {cap} feasible (S, T) pairs", ADSEED_ERR_CAP_BRUTEFORCE)
                mask = inst.Mask(ids[j] for j in combo)
                seen.setdefault(mask.tobytes(), (first, mask))

    entries = list(seen.values())
    masks = np.stack([mask for _, mask in entries])
    values, _, _ = ValueNonAdaptiveBatch(inst, oracle, masks, METHOD_AUTO, limit=len(inst.ground))

    best = 0
    for i in range(1, len(entries)):
        if values[i] > values[best] + ADSEED_BUDGET_TOL:
            best = i
    first, mask = entries[best]
    if values[best] <= 0.0:
        return EMPTY_NONADAPTIVE, 0.0
    policy = CreateNonAdaptivePolicy(inst, first, inst.Ids(mask))
    logger.debug("[OptNonAdaptiveBruteforce] k=%g pairs=%d value=%.12g", k, pairs, values[best])
    return policy, float(values[best])


"""
" class OptimalExecutor. seeds S* and, per realization, the optimal second
" stage of size at most k - |S*|.
"""
class OptimalExecutor(AdaptiveExecutor):
    def __init__(self, inst: Instance, oracle: Oracle, first: Sequence[str], k: int):
        self.__oracle = oracle
        self.__first = frozenset(first)
        self.__t = int(k) - len(self.__first)
        self.__cols = oracle.Indices(sorted(inst.NeighborsOf(self.__first)))

    def First(self) -> FrozenSet[str]:
        return self.__first

    def ExecuteBatch(self, realized: np.ndarray, stream: Optional[Stream] = None) -> np.ndarray:
        base = np.zeros_like(realized, dtype=bool)
        return SelectBatch(self.__oracle, base, self.__cols, realized[:, self.__cols], self.__t,
                           SECOND_STAGE_EXACT, cap=GetConfig().subset_cap)
