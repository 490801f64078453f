import math
import itertools
import logging

from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np
from scipy.special import comb

from ..core.config import GetConfig
from ..core.error import CapExceededError
from ..core.instance import Instance, IterRealizationChunks, SampleRealizationMatrix
from ..core.internal import *
from ..core.policy import *
from ..evaluation.estimate import Estimate
from ..evaluation.executor import PolicyExecutor, ResolveBlockMode
from ..evaluation.second_stage import SelectBatch
from ..functions.oracle import Oracle
from ..nonadaptive.nonadaptive_api import DENSITY_TIE_TOL, WINNER_SAMPLE_FACTOR
from ..utils.stream import Stream, CreateStream
from ..utils.thread import ParallelMap

logger = logging.getLogger("adseed.locallyadaptive")


"""
" class BlockSearchResult
"""
@dataclass(frozen=True)
class BlockSearchResult:
    block: AdaptiveBlockSpec
    marginal_value: Estimate
    density: float


def CandidateCount(xCount: int, sizeLimit: int, budgetLimit: int) -> int:
    return int(sum(comb(xCount, s, exact=True) for s in range(1, min(sizeLimit, xCount) + 1))) * budgetLimit


"""
" class RealizationSet
" Realizations of N(X) with weights: every realization with its probability
" when there are no more of them than samples, else equally weighted samples.
"""
class RealizationSet:
    def __init__(self, inst: Instance, samples: int, stream: Stream, limit: int = None):
        if limit is None:
            limit = min(GetConfig().enum_limit, int(math.log2(max(samples, 1))))
        if len(inst.ground) <= limit:
            chunks = list(IterRealizationChunks(inst.p, limit))
            self.realized = np.concatenate([bits for bits, _ in chunks])
            self.weights = np.concatenate([probs for _, probs in chunks])
            self.exact = True
        else:
            self.realized = SampleRealizationMatrix(inst.p, samples, stream.rng)
            self.weights = np.full(samples, 1.0 / samples)
            self.exact = False

    def Estimate(self, values: np.ndarray) -> Estimate:
        mean = float(self.weights @ values)
        if self.exact:
            return Estimate(mean, 0.0, 0, True)
        n = len(values)
        std = float(values.std(ddof=1)) / math.sqrt(n) if n > 1 else 0.0
        return Estimate(mean, std, n, False)


def _BlockGain(oracle: Oracle, inst: Instance, realizations: RealizationSet, seeded: np.ndarray,
               first: Tuple[str, ...], t: int) -> np.ndarray:
    cols = oracle.Indices(sorted(inst.NeighborsOf(first)))
    block = AdaptiveBlockSpec(frozenset(first), t)
    mode = ResolveBlockMode(block, len(cols))
    picks = SelectBatch(oracle, seeded, cols, realizations.realized[:, cols], t, mode)
    return oracle.ValueBatch(seeded | picks)


"""
" function FindOptimalAdaptiveBlock
" Scores every first-stage set of at most ceil(1/eps^2) nodes with every
" second-stage budget of at most ceil(2/eps) that fits the remaining
" budget, on top of the blocks of `current`. All candidates share one set
" of realizations.
"""
def FindOptimalAdaptiveBlock(inst: Instance, oracle: Oracle, current: LocallyAdaptivePolicy, epsilon: float,
                             samples: int = None, stream: Stream = None, cap: int = None,
                             budget: float = None) -> Optional[BlockSearchResult]:
    config = GetConfig()
    samples = config.block_samples if samples is None else samples
    stream = CreateStream(0) if stream is None else stream
    cap = config.subset_cap if cap is None else cap
    budget = inst.budget if budget is None else budget

    sizeLimit, budgetLimit = BlockSizeLimit(epsilon), BlockBudgetLimit(epsilon)
    count = CandidateCount(len(inst.x_nodes), sizeLimit, budgetLimit)
    if count > cap:
        raise CapExceededError(f"{count} candidate adaptive blocks exceed cap {cap}", ADSEED_ERR_CAP_CANDIDATES)
    remaining = budget - Cost(current)

    realizations = RealizationSet(inst, samples, stream.Derive(0))
    executor = PolicyExecutor(inst, oracle, current)
    seeded = executor.ExecuteBatch(realizations.realized, stream.Derive(1))
    baseValues = oracle.ValueBatch(seeded)
    baseValue = float(realizations.weights @ baseValues)

    candidates = []
    for size in range(1, min(sizeLimit, len(inst.x_nodes)) + 1):
        for first in itertools.combinations(sorted(inst.x_nodes), size):
            for t in range(1, budgetLimit + 1):
                if size + t <= remaining + ADSEED_BUDGET_TOL:
                    candidates.append((first, t))
    if not candidates:
        return None

    def score(candidate):
        first, t = candidate
        return float(realizations.weights @ _BlockGain(oracle, inst, realizations, seeded, first, t)) - baseValue

    marginals = np.maximum(np.array(ParallelMap(score, candidates, config.threads)), 0.0)
    costs = np.array([len(first) + t for first, t in candidates], dtype=float)
    densities = marginals / costs

    best = None
    # candidates are listed by size, then ids, then t; sort by cost first
    for i in sorted(range(len(candidates)), key=lambda i: (costs[i], candidates[i])):
        if best is None or densities[i] > densities[best] + DENSITY_TIE_TOL:
            best = i

    first, t = candidates[best]
    block = AdaptiveBlockSpec(frozenset(first), t, BLOCK_MODE_AUTO)
    if realizations.exact:
        marginal = Estimate(float(marginals[best]), 0.0, 0, True)
    else:
        marginal = _Reestimate(inst, oracle, executor, first, t, WINNER_SAMPLE_FACTOR * samples, stream.Derive(2))
    logger.debug("[FindOptimalAdaptiveBlock] %d candidates, best S=%s t=%d density %.6g", len(candidates),
                 sorted(first), t, marginal.mean / costs[best])
    return BlockSearchResult(block, marginal, marginal.mean / costs[best])


def _Reestimate(inst: Instance, oracle: Oracle, executor: PolicyExecutor, first, t: int, samples: int,
                stream: Stream) -> Estimate:
    realizations = RealizationSet(inst, samples, stream.Derive(0), limit=-1)
    seeded = executor.ExecuteBatch(realizations.realized, stream.Derive(1))
    gains = _BlockGain(oracle, inst, realizations, seeded, first, t) - oracle.ValueBatch(seeded)
    estimate = realizations.Estimate(gains)
    return Estimate(max(0.0, estimate.mean), estimate.std_error, estimate.samples, False)
