import math

from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterable, List, Mapping, Optional, Tuple, Union

from .error import InputError
from .instance import Instance
from .internal import *


"""
" policy kinds
"""
POLICY_KIND_NONADAPTIVE = "nonadaptive"
POLICY_KIND_EPSLOCAL = "epslocal"
POLICY_KIND_LOCALLYADAPTIVE = "locallyadaptive"

"""
" adaptive block modes
"""
BLOCK_MODE_EXACT = "exact"
BLOCK_MODE_GREEDY = "greedy"
BLOCK_MODE_AUTO = "auto"
BLOCK_MODE_CRS = "crs"

BLOCK_MODES = (BLOCK_MODE_EXACT, BLOCK_MODE_GREEDY, BLOCK_MODE_AUTO, BLOCK_MODE_CRS)


def BlockSizeLimit(epsilon: float) -> int:
    return math.ceil(1.0 / (epsilon * epsilon) - ADSEED_BUDGET_TOL)


def BlockBudgetLimit(epsilon: float) -> int:
    return math.ceil(2.0 / epsilon - ADSEED_BUDGET_TOL)


"""
" class NonAdaptivePolicy
"""
@dataclass(frozen=True)
class NonAdaptivePolicy:
    first: FrozenSet[str]
    second: FrozenSet[str]
    # p_j of every second-stage node, so the policy prices itself
    weights: Mapping[str, float] = field(default_factory=dict)

    def SecondCost(self) -> float:
        return float(sum(self.weights[y] for y in self.second))


def CreateNonAdaptivePolicy(inst: Instance, first: Iterable[str], second: Iterable[str]) -> NonAdaptivePolicy:
    second = frozenset(second)
    missing = [y for y in second if y not in inst.probabilities]
    if missing:
        raise InputError(f"unknown neighbor ids in second stage: {sorted(missing)}", ADSEED_ERR_INPUT_NEIGHBOR)
    return NonAdaptivePolicy(frozenset(first), second, {y: inst.probabilities[y] for y in second})


EMPTY_NONADAPTIVE = NonAdaptivePolicy(frozenset(), frozenset(), {})


"""
" class BudgetedBlock
"""
@dataclass(frozen=True)
class BudgetedBlock:
    first: FrozenSet[str]
    budget: float
    second: FrozenSet[str]
    weights: Mapping[str, float] = field(default_factory=dict)

    def Cost(self) -> float:
        return len(self.first) + self.budget

    def SecondCost(self) -> float:
        return float(sum(self.weights[y] for y in self.second))


"""
" class EpsilonLocalPolicy
"""
@dataclass(frozen=True)
class EpsilonLocalPolicy:
    blocks: Tuple[BudgetedBlock, ...]
    epsilon: float

    def Second(self) -> FrozenSet[str]:
        result = set()
        for block in self.blocks:
            result.update(block.second)
        return frozenset(result)


"""
" class AdaptiveBlockSpec
"""
@dataclass(frozen=True)
class AdaptiveBlockSpec:
    first: FrozenSet[str]
    second_budget: int
    mode: str = BLOCK_MODE_AUTO
    # crs mode only: thinning probability, seeding cap and the a priori set it thins
    keep_prob: Optional[float] = None
    cap: Optional[float] = None
    second: Optional[FrozenSet[str]] = None

    def Cost(self) -> int:
        return len(self.first) + self.second_budget


"""
" class LocallyAdaptivePolicy
"""
@dataclass(frozen=True)
class LocallyAdaptivePolicy:
    blocks: Tuple[AdaptiveBlockSpec, ...]
    epsilon: Optional[float] = None

    def First(self) -> FrozenSet[str]:
        result = set()
        for block in self.blocks:
            result.update(block.first)
        return frozenset(result)

    def Append(self, block: AdaptiveBlockSpec) -> "LocallyAdaptivePolicy":
        return LocallyAdaptivePolicy(self.blocks + (block,), self.epsilon)


"""
" class FractionalSecondStage
"""
@dataclass(frozen=True)
class FractionalSecondStage:
    q: Mapping[str, float]

    @property
    def budget_used(self) -> float:
        return float(sum(self.q.values()))

    def Fractional(self, p: Mapping[str, float], tol: float = 1e-12) -> List[str]:
        return [y for y, v in self.q.items() if tol < v < p[y] - tol]


Policy = Union[NonAdaptivePolicy, EpsilonLocalPolicy, LocallyAdaptivePolicy]


"""
" function Cost
"""
def Cost(policy: Policy) -> float:
    if isinstance(policy, NonAdaptivePolicy):
        return len(policy.first) + policy.SecondCost()
    if isinstance(policy, EpsilonLocalPolicy):
        return float(sum(block.Cost() for block in policy.blocks))
    if isinstance(policy, LocallyAdaptivePolicy):
        return float(sum(block.Cost() for block in policy.blocks))
    raise InputError(f"not a policy: {type(policy).__name__}", ADSEED_ERR_INPUT_POLICY)


def PolicyKind(policy: Policy) -> str:
    if isinstance(policy, NonAdaptivePolicy):
        return POLICY_KIND_NONADAPTIVE
    if isinstance(policy, EpsilonLocalPolicy):
        return POLICY_KIND_EPSLOCAL
    if isinstance(policy, LocallyAdaptivePolicy):
        return POLICY_KIND_LOCALLYADAPTIVE
    raise InputError(f"not a policy: {type(policy).__name__}", ADSEED_ERR_INPUT_POLICY)


"""
" function CheckPolicy. structural and budget violations as data.
"""
def CheckPolicy(inst: Instance, policy: Policy, budget: float = None) -> List[str]:
    budget = inst.budget if budget is None else budget
    violations = []

    def checkFirst(first, where):
        unknown = sorted(x for x in first if x not in inst.x_nodes)
        if unknown:
            violations.append(f"{where}: unknown first-stage nodes {unknown}")

    def checkSecond(first, second, weights, where):
        reachable = inst.NeighborsOf(first)
        outside = sorted(y for y in second if y not in reachable)
        if outside:
            violations.append(f"{where}: second-stage nodes {outside} are not neighbors of the first stage")
        for y in second:
            if y in inst.probabilities and abs(weights.get(y, -1.0) - inst.probabilities[y]) > ADSEED_BUDGET_TOL:
                violations.append(f"{where}: weight of '{y}' does not match its probability")

    if isinstance(policy, NonAdaptivePolicy):
        checkFirst(policy.first, "policy")
        checkSecond(policy.first, policy.second, policy.weights, "policy")

    elif isinstance(policy, EpsilonLocalPolicy):
        if not 0.0 < policy.epsilon < 1.0:
            violations.append(f"epsilon {policy.epsilon} outside (0,1)")
        for b, block in enumerate(policy.blocks):
            where = f"block {b}"
            checkFirst(block.first, where)
            checkSecond(block.first, block.second, block.weights, where)
            if block.SecondCost() > block.budget + ADSEED_BUDGET_TOL:
                violations.append(f"{where}: second-stage cost {block.SecondCost():.6g} exceeds block budget {block.budget:.6g}")
            if 0.0 < policy.epsilon < 1.0:
                if len(block.first) > BlockSizeLimit(policy.epsilon):
                    violations.append(f"{where}: {len(block.first)} first-stage nodes exceed {BlockSizeLimit(policy.epsilon)}")
                if block.budget > 2.0 / policy.epsilon + ADSEED_BUDGET_TOL:
                    violations.append(f"{where}: budget {block.budget:.6g} exceeds 2/epsilon")
                if block.budget < 1.0 / policy.epsilon - ADSEED_BUDGET_TOL:
                    violations.append(f"{where}: budget {block.budget:.6g} is below 1/epsilon")

    elif isinstance(policy, LocallyAdaptivePolicy):
        for b, block in enumerate(policy.blocks):
            where = f"block {b}"
            checkFirst(block.first, where)
            if block.mode not in BLOCK_MODES:
                violations.append(f"{where}: unknown mode '{block.mode}'")
            if block.second_budget < 0:
                violations.append(f"{where}: negative second-stage budget")
            if block.mode == BLOCK_MODE_CRS:
                if block.keep_prob is None or not 0.0 <= block.keep_prob <= 1.0:
                    violations.append(f"{where}: crs block needs keep_prob in [0,1]")
                if block.cap is None or math.floor(block.cap + ADSEED_BUDGET_TOL) > block.second_budget:
                    violations.append(f"{where}: crs cap must not exceed the block budget")
                if block.second is None:
                    violations.append(f"{where}: crs block needs its a priori second stage")
                else:
                    checkSecond(block.first, block.second, inst.probabilities, where)
            if policy.epsilon is not None:
                if len(block.first) > BlockSizeLimit(policy.epsilon):
                    violations.append(f"{where}: {len(block.first)} first-stage nodes exceed {BlockSizeLimit(policy.epsilon)}")
                if block.second_budget > BlockBudgetLimit(policy.epsilon):
                    violations.append(f"{where}: budget {block.second_budget} exceeds {BlockBudgetLimit(policy.epsilon)}")

    else:
        return [f"not a policy: {type(policy).__name__}"]

    cost = Cost(policy)
    if cost > budget + ADSEED_BUDGET_TOL:
        violations.append(f"cost {cost:.12g} exceeds budget {budget:.12g}")

    return violations
