import logging

from dataclasses import dataclass, field
from typing import Iterable, List, Sequence

import numpy as np

from ..core.error import InputError
from ..core.instance import IterRealizationChunks
from ..core.internal import *
from ..functions.oracle import Oracle

logger = logging.getLogger("adseed.sosp")


"""
" class SospProblem
" Choose items of expected size at most k; item i realizes with probability
" p[i]. base_x holds the realization probability of every ground element
" that is already fixed (zero elsewhere), so the objective is a marginal
" over it.
"""
@dataclass(frozen=True, eq=False)
class SospProblem:
    oracle: Oracle
    items: tuple
    p: np.ndarray
    k: float
    base_x: np.ndarray = field(default=None, compare=False)

    @property
    def cols(self) -> np.ndarray:
        return self.oracle.Indices(self.items)

    def Delta(self) -> float:
        return float(self.p.max()) if len(self.p) else 0.0

    def Size(self) -> int:
        return len(self.items)

    def Point(self, x: np.ndarray) -> np.ndarray:
        """
        Full-width probability vector: items realize independently with x[i]
        on top of base_x.
        """
        full = self.base_x.copy()
        cols = self.cols
        full[cols] = 1.0 - (1.0 - full[cols]) * (1.0 - x)
        return full

    def Feasible(self, q: np.ndarray, tol: float = ADSEED_BUDGET_TOL) -> bool:
        q = np.asarray(q, dtype=float)
        return (q.shape == self.p.shape and bool(np.all(q >= -tol)) and bool(np.all(q <= self.p + tol))
                and float(q.sum()) <= self.k + tol)

    def Ids(self, selected: Iterable[int]) -> List[str]:
        return [self.items[i] for i in selected]


def CreateSospProblem(oracle: Oracle, items: Sequence[str], p: Sequence[float], k: float,
                      baseX: np.ndarray = None) -> SospProblem:
    items = tuple(items)
    p = np.asarray(p, dtype=float)
    if len(items) != len(p):
        raise InputError(f"{len(items)} items but {len(p)} probabilities", ADSEED_ERR_INPUT_PARAMETER)
    if len(set(items)) != len(items):
        raise InputError("duplicate SOSP items", ADSEED_ERR_INPUT_PARAMETER)
    baseX = np.zeros(oracle.Size()) if baseX is None else np.asarray(baseX, dtype=float).copy()
    problem = SospProblem(oracle, items, p, float(k), baseX)
    violations = ValidateSospProblem(problem)
    if violations:
        raise InputError("invalid SOSP problem: " + "; ".join(violations), ADSEED_ERR_INPUT_PARAMETER)
    return problem


def ValidateSospProblem(problem: SospProblem) -> List[str]:
    violations = []
    if not problem.k > 0:
        violations.append(f"budget {problem.k} must be positive")
    if np.any(problem.p <= 0.0) or np.any(problem.p > 1.0):
        violations.append("probabilities must lie in (0,1]")
    if problem.base_x.shape != (problem.oracle.Size(),):
        violations.append("base probabilities must cover the oracle ground set")
    unknown = [y for y in problem.items if y not in problem.oracle.Ground()]
    if unknown:
        violations.append(f"items outside the oracle ground set: {unknown[:5]}")
    return violations


"""
" function ExactObjectiveBatch
" E[f] - E[f(base)] where item i realizes with probability x[r, i] in row r
" (for a set T: x = p on T). Closed form when the oracle has one, else full
" enumeration over the random support.
"""
def ExactObjectiveBatch(problem: SospProblem, x: np.ndarray, limit: int = None) -> np.ndarray:
    x = np.atleast_2d(np.asarray(x, dtype=float))
    oracle = problem.oracle
    points = np.repeat(problem.base_x[None, :], x.shape[0], axis=0)
    cols = problem.cols
    points[:, cols] = 1.0 - (1.0 - points[:, cols]) * (1.0 - x)
    if oracle.HasClosedForm():
        return oracle.MultilinearBatch(points) - oracle.Multilinear(problem.base_x)

    values = np.zeros(x.shape[0])
    base = _EnumeratedValue(oracle, problem.base_x, limit)
    for r in range(x.shape[0]):
        values[r] = _EnumeratedValue(oracle, points[r], limit) - base
    return values


def ExactObjective(problem: SospProblem, x, limit: int = None) -> float:
    return float(ExactObjectiveBatch(problem, np.asarray(x, dtype=float)[None, :], limit)[0])


def _EnumeratedValue(oracle: Oracle, point: np.ndarray, limit: int = None) -> float:
    support = np.flatnonzero(point > 0.0)
    if len(support) == 0:
        return float(oracle.ValueBatch(np.zeros((1, oracle.Size()), dtype=bool))[0])
    total = 0.0
    for bits, probs in IterRealizationChunks(point[support], limit):
        rows = np.zeros((bits.shape[0], oracle.Size()), dtype=bool)
        rows[:, support] = bits
        total += float(probs @ oracle.ValueBatch(rows))
    return total
