import math
import logging

from typing import Optional, Tuple

from ..core.config import GetConfig
from ..core.error import InputError
from ..core.instance import Instance
from ..core.internal import *
from ..core.policy import *
from ..evaluation.executor import PolicyExecutor
from ..functions.oracle import Oracle
from ..utils.stream import Stream, CreateStream
from .block_finder import BlockFinder
from .greedy import NonAdaptiveGreedy
from .nonadaptive_api import *
from .repair import SmallKFallback, TrimFirstStage
from .trace import GreedyTrace

logger = logging.getLogger("adseed.nonadaptive")


"""
" function CrsAdapt
" Seeds S up front; in each realization keeps every realized j in T with
" probability 1 - epsilon and seeds the kept set only if it has at most
" k - |S| nodes.
"""
def CrsAdapt(inst: Instance, policy: NonAdaptivePolicy, epsilon: float, k: float = None) -> LocallyAdaptivePolicy:
    k = inst.budget if k is None else float(k)
    if not 0.0 < epsilon < 1.0:
        raise InputError(f"epsilon must lie in (0,1) (got {epsilon})")
    room = k - len(policy.first)
    if room < -ADSEED_BUDGET_TOL:
        raise InputError(f"first stage of {len(policy.first)} nodes exceeds budget {k:g}", ADSEED_ERR_INPUT_POLICY)
    if epsilon >= CRS_MAX_EPSILON:
        logger.warning("[CrsAdapt] epsilon %g is not below %g, the (1-2eps) guarantee does not apply",
                       epsilon, CRS_MAX_EPSILON)
    if room <= epsilon ** -4:
        logger.warning("[CrsAdapt] k - |S| = %g is not above eps^-4 = %g, the (1-2eps) guarantee does not apply",
                       room, epsilon ** -4)

    if not policy.first:
        return LocallyAdaptivePolicy(())
    block = AdaptiveBlockSpec(
        first=frozenset(policy.first),
        second_budget=int(math.floor(max(room, 0.0) + ADSEED_BUDGET_TOL)),
        mode=BLOCK_MODE_CRS,
        keep_prob=1.0 - epsilon,
        cap=max(room, 0.0),
        second=frozenset(policy.second),
    )
    return LocallyAdaptivePolicy((block,))


def CrsExecutor(inst: Instance, oracle: Oracle, policy: NonAdaptivePolicy, epsilon: float,
                k: float = None) -> PolicyExecutor:
    return PolicyExecutor(inst, oracle, CrsAdapt(inst, policy, epsilon, k))


"""
" function NaToAdaptive
" Non-adaptive greedy turned into an adaptive policy. Small budgets go to
" the brute-force fallback; otherwise the greedy output is trimmed when
" the leftover budget is below (4/epsilon)^4 and then thinned with
" epsilon/4.
"""
def NaToAdaptive(inst: Instance, oracle: Oracle, k: float = None, epsilon: float = None,
                 finder: BlockFinder = None, samples: int = None,
                 stream: Stream = None) -> Tuple[LocallyAdaptivePolicy, Optional[GreedyTrace]]:
    k = inst.budget if k is None else float(k)
    epsilon = finder.Epsilon() if finder is not None else epsilon
    if epsilon is None or not 0.0 < epsilon < 1.0:
        raise InputError(f"epsilon must lie in (0,1) (got {epsilon})")
    stream = CreateStream(0) if stream is None else stream

    if k <= max(GetConfig().small_k_threshold, GREEDY_RESERVE / epsilon):
        logger.info("[NaToAdaptive] k=%g is small, use the brute-force fallback", k)
        return SmallKFallback(inst, oracle, k), None

    policy, trace = NonAdaptiveGreedy(inst, oracle, k, epsilon, finder, samples, stream.Derive(0))
    target = (4.0 / epsilon) ** 4
    room = k - len(policy.first)
    if room < target:
        c = target - room
        if math.ceil(c - ADSEED_BUDGET_TOL) < len(policy.first):
            policy = TrimFirstStage(inst, oracle, policy, c, samples, stream.Derive(1))
        else:
            logger.warning("[NaToAdaptive] cannot free %g budget from %d first-stage nodes, "
                           "thinning without the guarantee", c, len(policy.first))

    return CrsAdapt(inst, policy, epsilon / 4.0, k), trace
