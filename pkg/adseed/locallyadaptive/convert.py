import math
import logging

from typing import Dict, List, Optional, Tuple

import numpy as np

from ..core.error import InputError
from ..core.instance import Instance
from ..core.internal import *
from ..core.policy import *
from ..evaluation.evaluator import METHOD_AUTO, ValueNonAdaptiveBatch
from ..functions.oracle import Oracle
from ..nonadaptive.block_finder import BlockFinder
from ..nonadaptive.greedy import NonAdaptiveGreedy
from ..nonadaptive.nonadaptive_api import CRS_MAX_EPSILON
from ..nonadaptive.trace import GreedyTrace
from ..utils.stream import Stream, CreateStream

logger = logging.getLogger("adseed.locallyadaptive")


def BelongsTo(inst: Instance, policy: NonAdaptivePolicy) -> Dict[str, List[str]]:
    """
    Children of every first-stage node: each y in T goes to the smallest
    parent of y in S (ids in lexicographic order). Children are id-sorted.
    """
    order = sorted(policy.first)
    rank = {x: i for i, x in enumerate(order)}
    children = {x: [] for x in order}
    for y in sorted(policy.second):
        parents = [x for x in inst.parents.get(y, ()) if x in rank]
        if not parents:
            raise InputError(f"second-stage node '{y}' has no parent in the first stage", ADSEED_ERR_INPUT_POLICY)
        children[min(parents, key=rank.get)].append(y)
    return children


"""
" class _BlockBuilder. the block under construction and the closed blocks.
"""
class _BlockBuilder:
    def __init__(self, inst: Instance, epsilon: float):
        self.inst = inst
        self.low = 1.0 / epsilon
        self.high = 2.0 / epsilon
        self.size = int(math.floor(1.0 / (epsilon * epsilon) + ADSEED_BUDGET_TOL))
        self.blocks: List[BudgetedBlock] = []
        self.first: List[str] = []
        self.second: List[str] = []
        self.cost = 0.0
        self.splits = 0

    def Close(self, budget: float):
        if not self.first:
            return
        second = frozenset(self.second)
        self.blocks.append(BudgetedBlock(frozenset(self.first), float(budget), second,
                                         {y: self.inst.probabilities[y] for y in second}))
        self.first, self.second, self.cost = [], [], 0.0

    def Add(self, x: str, children: List[str]):
        rest = list(children)
        while True:
            if x not in self.first:
                self.first.append(x)
            restCost = self.inst.ExpectedCost(rest)
            if self.cost + restCost > self.high + ADSEED_BUDGET_TOL:
                # a maximal set of children that keeps the block within 2/eps, scanned in id order
                phi, left = [], []
                for y in rest:
                    p = self.inst.probabilities[y]
                    if self.cost + p > self.high + ADSEED_BUDGET_TOL:
                        left.append(y)
                        continue
                    phi.append(y)
                    self.cost += p
                self.second.extend(phi)
                rest = left
                self.Close(self.cost)
                self.splits += 1
                continue
            self.second.extend(rest)
            self.cost += restCost
            break

        if self.cost > self.low + ADSEED_BUDGET_TOL:
            self.Close(self.cost)
        elif len(self.first) >= self.size:
            self.Close(self.low)


"""
" function NonAdaptiveToLocal
" Groups S (in id order) into blocks of nodes and the children that belong
" to them. A block closes once its children cost more than 1/eps (budget =
" that cost), once it would pass 2/eps (the node is split: the children
" that fit stay, the node opens the next block with the rest), or once it
" holds floor(1/eps^2) nodes (budget = 1/eps). The lowest-density blocks
" are then dropped until the cost is at most the budget.
"""
def NonAdaptiveToLocal(inst: Instance, oracle: Oracle, policy: NonAdaptivePolicy, epsilon: float,
                       prune: bool = True, budget: float = None, samples: int = None,
                       stream: Stream = None) -> EpsilonLocalPolicy:
    if not 0.0 < epsilon < 1.0:
        raise InputError(f"epsilon must lie in (0,1) (got {epsilon})")
    budget = inst.budget if budget is None else budget
    if Cost(policy) <= 3.0 / epsilon ** 3:
        logger.warning("[NonAdaptiveToLocal] policy cost %g is not above 3/eps^3 = %g, "
                       "the (1-3eps) guarantee does not apply", Cost(policy), 3.0 / epsilon ** 3)

    children = BelongsTo(inst, policy)
    builder = _BlockBuilder(inst, epsilon)
    for x in sorted(policy.first):
        builder.Add(x, children[x])
    builder.Close(builder.low)

    local = EpsilonLocalPolicy(tuple(builder.blocks), epsilon)
    logger.debug("[NonAdaptiveToLocal] %d blocks, %d splits, cost %g", len(local.blocks), builder.splits, Cost(local))
    if prune:
        local = PruneBlocks(inst, oracle, local, budget, samples, stream)
    return local


"""
" function PruneBlocks
" Drops the block with the lowest marginal density (value lost without it
" over its cost) until the cost is at most the budget.
"""
def PruneBlocks(inst: Instance, oracle: Oracle, local: EpsilonLocalPolicy, budget: float, samples: int = None,
                stream: Stream = None) -> EpsilonLocalPolicy:
    stream = CreateStream(0) if stream is None else stream
    blocks = list(local.blocks)
    rounds = 0
    while blocks and sum(block.Cost() for block in blocks) > budget + ADSEED_BUDGET_TOL:
        full = np.zeros(len(inst.ground), dtype=bool)
        for block in blocks:
            full |= inst.Mask(block.second)
        masks = [full]
        for block in blocks:
            masks.append(full & ~inst.Mask(block.second))
        means, _, _ = ValueNonAdaptiveBatch(inst, oracle, np.stack(masks), METHOD_AUTO, samples, stream.Derive(rounds))
        densities = [(means[0] - means[b + 1]) / block.Cost() for b, block in enumerate(blocks)]
        # latest block among ties
        drop = min(range(len(blocks)), key=lambda b: (densities[b], -b))
        logger.debug("[PruneBlocks] drop block %d, density %.6g", drop, densities[drop])
        blocks.pop(drop)
        rounds += 1
    return EpsilonLocalPolicy(tuple(blocks), local.epsilon)


"""
" function LocalToLocallyAdaptive
" Every block (S_b, k_b, T_b) becomes a thinning block: realized nodes of T_b
" are kept with probability 1 - eps and seeded only if at most k_b are kept.
"""
def LocalToLocallyAdaptive(local: EpsilonLocalPolicy, epsilon: float) -> LocallyAdaptivePolicy:
    if not 0.0 < epsilon < 1.0:
        raise InputError(f"epsilon must lie in (0,1) (got {epsilon})")
    if epsilon >= CRS_MAX_EPSILON:
        logger.warning("[LocalToLocallyAdaptive] epsilon %g is not below %g, the (1-2eps) guarantee does not apply",
                       epsilon, CRS_MAX_EPSILON)

    blocks = []
    for block in local.blocks:
        blocks.append(AdaptiveBlockSpec(
            first=block.first,
            second_budget=int(math.floor(block.budget + ADSEED_BUDGET_TOL)),
            mode=BLOCK_MODE_CRS,
            keep_prob=1.0 - epsilon,
            cap=block.budget,
            second=block.second,
        ))
    return LocallyAdaptivePolicy(tuple(blocks), local.epsilon)


"""
" function NaToLocallyAdaptive
" non-adaptive greedy -> eps'-local policy -> thinned locally-adaptive policy.
"""
def NaToLocallyAdaptive(inst: Instance, oracle: Oracle, k: float = None, epsilon: float = None,
                        localEpsilon: float = None, finder: BlockFinder = None, samples: int = None,
                        stream: Stream = None) -> Tuple[LocallyAdaptivePolicy, Optional[GreedyTrace]]:
    k = inst.budget if k is None else float(k)
    localEpsilon = epsilon if localEpsilon is None else localEpsilon
    stream = CreateStream(0) if stream is None else stream

    policy, trace = NonAdaptiveGreedy(inst, oracle, k, epsilon, finder, samples, stream.Derive(0))
    local = NonAdaptiveToLocal(inst, oracle, policy, localEpsilon, budget=k, samples=samples, stream=stream.Derive(1))
    return LocalToLocallyAdaptive(local, epsilon), trace
