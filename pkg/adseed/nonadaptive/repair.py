import math
import logging

import numpy as np

from ..core.error import InputError
from ..core.instance import Instance
from ..core.internal import *
from ..core.policy import *
from ..evaluation.evaluator import METHOD_AUTO, ValueNonAdaptiveBatch
from ..functions.oracle import Oracle
from ..oracle.bruteforce import IntegralBudget, OptAdaptiveBruteforce
from ..utils.stream import Stream, CreateStream

logger = logging.getLogger("adseed.nonadaptive")


"""
" function SmallKFallback
" The optimal adaptive policy by brute force, as one exact block: seed S*
" up front, then the best k - |S*| realized neighbors of S*.
"""
def SmallKFallback(inst: Instance, oracle: Oracle, k: float = None) -> LocallyAdaptivePolicy:
    k = IntegralBudget(inst.budget if k is None else k)
    report = OptAdaptiveBruteforce(inst, oracle, k, nonadaptive=False)
    first = report.best_first_stage
    logger.info("[SmallKFallback] k=%d S=%s value %.12g", k, sorted(first), report.opt_adaptive)
    if not first:
        return LocallyAdaptivePolicy(())
    return LocallyAdaptivePolicy((AdaptiveBlockSpec(first, k - len(first), BLOCK_MODE_EXACT),))


def ExclusiveChildren(inst: Instance, first, second, x: str) -> frozenset:
    rest = set(first) - {x}
    return frozenset(y for y in second if x in inst.parents[y] and not any(z in rest for z in inst.parents[y]))


"""
" function TrimFirstStage
" Removes ceil(c) first-stage nodes one at a time, each time the node whose
" removal (with the neighbors only it reaches) loses the least value.
"""
def TrimFirstStage(inst: Instance, oracle: Oracle, policy: NonAdaptivePolicy, c: float, samples: int = None,
                   stream: Stream = None) -> NonAdaptivePolicy:
    if not policy.first:
        raise InputError("cannot trim an empty first stage", ADSEED_ERR_INPUT_POLICY)
    count = max(0, math.ceil(c - ADSEED_BUDGET_TOL))
    if count >= len(policy.first):
        raise InputError(f"cannot remove {count} of {len(policy.first)} first-stage nodes", ADSEED_ERR_INPUT_POLICY)
    stream = CreateStream(0) if stream is None else stream

    first, second = set(policy.first), set(policy.second)
    for step in range(count):
        order = sorted(first)
        remaining = [second - ExclusiveChildren(inst, first, second, x) for x in order]
        masks = np.stack([inst.Mask(second)] + [inst.Mask(ids) for ids in remaining])
        means, _, _ = ValueNonAdaptiveBatch(inst, oracle, masks, METHOD_AUTO, samples, stream.Derive(step))
        losses = means[0] - means[1:]
        # ids are sorted, so the first minimum wins ties
        best = int(np.argmin(losses))
        logger.debug("[TrimFirstStage] remove %s, loss %.6g", order[best], losses[best])
        first.discard(order[best])
        second = remaining[best]

    return CreateNonAdaptivePolicy(inst, first, second)
