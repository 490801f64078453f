import logging

from typing import Optional, Tuple

from ..core.config import GetConfig
from ..core.error import SmallBudgetError
from ..core.instance import Instance
from ..core.internal import *
from ..core.policy import *
from ..functions.oracle import Oracle
from ..nonadaptive.nonadaptive_api import DENSITY_TIE_TOL
from ..nonadaptive.repair import SmallKFallback
from ..nonadaptive.trace import GreedyTrace
from ..utils.stream import Stream, CreateStream
from .block_search import FindOptimalAdaptiveBlock
from .locallyadaptive_api import *

logger = logging.getLogger("adseed.locallyadaptive")


def LoopReserve(epsilon: float) -> float:
    return LOOP_RESERVE / (epsilon * epsilon)


"""
" function LocallyAdaptiveGreedy
" Appends the densest adaptive block while the policy cost is below
" k - 3/eps^2.
"""
def LocallyAdaptiveGreedy(inst: Instance, oracle: Oracle, k: float = None, epsilon: float = None,
                          samples: int = None, stream: Stream = None,
                          cap: int = None) -> Tuple[LocallyAdaptivePolicy, GreedyTrace]:
    k = inst.budget if k is None else float(k)
    stream = CreateStream(0) if stream is None else stream
    limit = k - LoopReserve(epsilon)
    if limit <= 0.0:
        raise SmallBudgetError(f"budget {k:g} is not above 3/eps^2 = {LoopReserve(epsilon):g}; "
                               f"use the small-k fallback")

    policy = LocallyAdaptivePolicy((), epsilon)
    trace = GreedyTrace()
    value = 0.0
    while Cost(policy) < limit - ADSEED_BUDGET_TOL:
        result = FindOptimalAdaptiveBlock(inst, oracle, policy, epsilon, samples, stream.Derive(len(trace)), cap, k)
        if result is None or result.marginal_value.mean <= DENSITY_TIE_TOL:
            logger.debug("[LocallyAdaptiveGreedy] no block with positive marginal, stop")
            break
        policy = policy.Append(result.block)
        value += result.marginal_value.mean
        entry = trace.Append(result.block.first, (), result.marginal_value.mean, result.density, Cost(policy), value,
                             result.block.second_budget)
        logger.debug("[LocallyAdaptiveGreedy] iteration %d block %s density %.6g cost %g", entry.iteration,
                     entry.BlockId(), entry.density, entry.cost)

    logger.info("[LocallyAdaptiveGreedy] %d blocks, cost %g of %g", len(policy.blocks), Cost(policy), k)
    return policy, trace


"""
" function SolveLocallyAdaptive. the greedy, or the brute-force optimum when
" k is small.
"""
def SolveLocallyAdaptive(inst: Instance, oracle: Oracle, k: float = None, epsilon: float = None,
                         samples: int = None, stream: Stream = None,
                         cap: int = None) -> Tuple[LocallyAdaptivePolicy, Optional[GreedyTrace]]:
    k = inst.budget if k is None else float(k)
    if k <= GetConfig().small_k_threshold or k <= LoopReserve(epsilon):
        logger.info("[SolveLocallyAdaptive] k=%g is small, use the brute-force fallback", k)
        return SmallKFallback(inst, oracle, k), None
    return LocallyAdaptiveGreedy(inst, oracle, k, epsilon, samples, stream, cap)
