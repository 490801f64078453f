import logging

from typing import Tuple

import numpy as np

from ..core.config import GetConfig
from ..core.error import SmallBudgetError
from ..core.instance import Instance
from ..core.internal import *
from ..core.policy import NonAdaptivePolicy, CreateNonAdaptivePolicy, Cost, EMPTY_NONADAPTIVE
from ..evaluation.evaluator import METHOD_AUTO, ValueNonAdaptiveBatch
from ..functions.oracle import Oracle
from ..utils.stream import Stream, CreateStream
from .block_finder import BlockFinder, EnumBlockFinder
from .nonadaptive_api import *
from .trace import GreedyTrace

logger = logging.getLogger("adseed.nonadaptive")


"""
" function NonAdaptiveGreedy
" Adds the densest block while |S| + C(T) <= k - 3/epsilon.
"""
def NonAdaptiveGreedy(inst: Instance, oracle: Oracle, k: float = None, epsilon: float = None,
                      finder: BlockFinder = None, samples: int = None,
                      stream: Stream = None) -> Tuple[NonAdaptivePolicy, GreedyTrace]:
    k = inst.budget if k is None else float(k)
    if finder is None:
        finder = EnumBlockFinder(inst, oracle, epsilon, samples, stream)
    epsilon = finder.Epsilon()
    limit = k - GREEDY_RESERVE / epsilon
    if limit <= 0.0:
        raise SmallBudgetError(f"budget {k:g} is not above 3/epsilon = {GREEDY_RESERVE / epsilon:g}; "
                               f"use the small-k fallback")

    first, second = set(), set()
    state, value = EMPTY_NONADAPTIVE, 0.0
    trace = GreedyTrace()
    while Cost(state) <= limit + ADSEED_BUDGET_TOL:
        block = finder.Find(state)
        if block is None or block.marginal.mean <= DENSITY_TIE_TOL:
            logger.debug("[NonAdaptiveGreedy] no block with positive marginal, stop")
            break
        first.add(block.x)
        second.update(block.second)
        state = CreateNonAdaptivePolicy(inst, first, second)
        value += block.marginal.mean
        entry = trace.Append({block.x}, block.second, block.marginal.mean, block.density, Cost(state), value)
        logger.debug("[NonAdaptiveGreedy] iteration %d block %s density %.6g cost %.6g", entry.iteration,
                     entry.BlockId(), entry.density, entry.cost)

    logger.info("[NonAdaptiveGreedy] %d blocks, cost %.6g of %g", len(trace), Cost(state), k)
    return state, trace


"""
" function ParentChildGreedy
" Takes the neighbor with the largest marginal expected value that still
" fits, paying for its first parent when no parent is selected yet.
"""
def ParentChildGreedy(inst: Instance, oracle: Oracle, k: float = None, samples: int = None,
                      stream: Stream = None) -> Tuple[NonAdaptivePolicy, GreedyTrace]:
    k = inst.budget if k is None else float(k)
    stream = CreateStream(0) if stream is None else stream
    samples = GetConfig().block_samples if samples is None else samples

    first, second = set(), set()
    state, value = EMPTY_NONADAPTIVE, 0.0
    trace = GreedyTrace()
    step = 0
    while True:
        spent = Cost(state)
        candidates = []
        for y in inst.ground:
            if y in second:
                continue
            parents = inst.parents[y]
            extra = 0.0 if any(x in first for x in parents) else 1.0
            if spent + extra + inst.probabilities[y] <= k + ADSEED_BUDGET_TOL:
                candidates.append((y, extra))
        if not candidates:
            break

        step += 1
        base = inst.Mask(second)
        masks = np.repeat(base[None, :], len(candidates) + 1, axis=0)
        for i, (y, _) in enumerate(candidates):
            masks[i + 1, inst.index[y]] = True
        means, _, _ = ValueNonAdaptiveBatch(inst, oracle, masks, METHOD_AUTO, samples, stream.Derive(step))
        gains = means[1:] - means[0]
        # candidates follow ground order; the first maximum wins ties
        best = int(np.argmax(gains))
        if gains[best] <= DENSITY_TIE_TOL:
            break

        y, extra = candidates[best]
        added = set()
        if extra:
            added.add(inst.parents[y][0])
            first.update(added)
        second.add(y)
        state = CreateNonAdaptivePolicy(inst, first, second)
        value += float(gains[best])
        trace.Append(added, {y}, float(gains[best]), float(gains[best]) / (extra + inst.probabilities[y]),
                     Cost(state), value)

    logger.info("[ParentChildGreedy] %d steps, cost %.6g of %g", len(trace), Cost(state), k)
    return state, trace
