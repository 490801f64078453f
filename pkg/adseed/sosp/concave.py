import logging

from dataclasses import dataclass, field
from typing import List

import numpy as np
from scipy.optimize import minimize_scalar

from ..core.config import GetConfig
from ..core.error import InputError
from ..core.internal import *
from ..core.policy import FractionalSecondStage
from .problem import SospProblem
from .sosp_api import *

logger = logging.getLogger("adseed.sosp")


"""
" class RelaxedObjective
" G(q) = E[f] with item i realized with probability 1 - exp(-q_i), minus the
" value of the fixed base. Concave in q for matroid rank sums.
"""
class RelaxedObjective:
    def __init__(self, problem: SospProblem):
        if not problem.oracle.HasClosedForm():
            raise InputError(f"{type(problem.oracle).__name__} has no closed form; the relaxed program needs one",
                             ADSEED_ERR_INPUT_FUNCTION)
        self.__problem = problem
        self.__cols = problem.cols
        self.__baseValue = problem.oracle.Multilinear(problem.base_x)
        # 1 - base on item columns scales the derivative of the combined probability
        self.__free = 1.0 - problem.base_x[self.__cols]

    def Problem(self) -> SospProblem:
        return self.__problem

    def Value(self, q: np.ndarray) -> float:
        return float(self.ValueBatch(np.asarray(q, dtype=float)[None, :])[0])

    def ValueBatch(self, q: np.ndarray) -> np.ndarray:
        problem = self.__problem
        points = np.repeat(problem.base_x[None, :], q.shape[0], axis=0)
        points[:, self.__cols] = 1.0 - self.__free * np.exp(-q)
        return problem.oracle.MultilinearBatch(points) - self.__baseValue

    def Gradient(self, q: np.ndarray) -> np.ndarray:
        q = np.asarray(q, dtype=float)
        point = self.__problem.base_x.copy()
        point[self.__cols] = 1.0 - self.__free * np.exp(-q)
        grad = self.__problem.oracle.MultilinearGradient(point)
        return grad[self.__cols] * self.__free * np.exp(-q)


def _CheckFeasible(problem: SospProblem, q: np.ndarray):
    if not problem.Feasible(q):
        raise InputError("q is outside {0 <= q <= p, sum(q) <= k}", ADSEED_ERR_INPUT_PARAMETER)


def RelaxedValue(problem: SospProblem, q) -> float:
    q = np.asarray(q, dtype=float)
    _CheckFeasible(problem, q)
    return RelaxedObjective(problem).Value(q)


def RelaxedGradient(problem: SospProblem, q) -> np.ndarray:
    q = np.asarray(q, dtype=float)
    _CheckFeasible(problem, q)
    return RelaxedObjective(problem).Gradient(q)


def KnapsackVertex(gradient: np.ndarray, p: np.ndarray, k: float) -> np.ndarray:
    """
    argmax of <gradient, v> over {0 <= v <= p, sum(v) <= k}: fill the
    coordinates with positive gradient in decreasing order.
    """
    v = np.zeros_like(p)
    room = k
    for i in np.argsort(-gradient, kind="stable"):
        if gradient[i] <= 0.0 or room <= 0.0:
            break
        v[i] = min(p[i], room)
        room -= v[i]
    return v


"""
" class ConcaveSolution
"""
@dataclass
class ConcaveSolution:
    q: FractionalSecondStage
    objective: float
    certificate_gap: float
    iterations: int = 0
    history: List[float] = field(default_factory=list)

    def Vector(self, problem: SospProblem) -> np.ndarray:
        return np.array([self.q.q[y] for y in problem.items])


"""
" function SolveConcave
" Frank-Wolfe over {0 <= q <= p, sum(q) <= k}. The open-loop step 2/(t+2)
" is taken unless a bounded line search on the segment does better.
"""
def SolveConcave(problem: SospProblem, iters: int = None, tol: float = None) -> ConcaveSolution:
    config = GetConfig()
    iters = config.fw_max_iters if iters is None else iters
    tol = config.fw_tol if tol is None else tol
    objective = RelaxedObjective(problem)

    q = np.zeros(problem.Size())
    value = 0.0
    history = [value]
    gap = np.inf
    t = 0
    for t in range(iters):
        grad = objective.Gradient(q)
        v = KnapsackVertex(grad, problem.p, problem.k)
        direction = v - q
        gap = max(0.0, float(grad @ direction))
        if gap <= tol:
            break

        gamma = 2.0 / (t + 2.0)
        stepValue = objective.Value(q + gamma * direction)
        res = minimize_scalar(lambda s: -objective.Value(q + s * direction), bounds=(0.0, 1.0),
                              method="bounded", options={"xatol": LINE_SEARCH_XATOL})
        if res.success and -res.fun > stepValue:
            gamma, stepValue = float(res.x), float(-res.fun)
        if stepValue <= value:
            logger.debug("[SolveConcave] no ascent along the vertex direction at iteration %d", t)
            break
        q = np.clip(q + gamma * direction, 0.0, problem.p)
        value = stepValue
        history.append(value)
    else:
        # the loop ran out; report the gap at the final point
        grad = objective.Gradient(q)
        gap = max(0.0, float(grad @ (KnapsackVertex(grad, problem.p, problem.k) - q)))

    logger.debug("[SolveConcave] %d iterations, objective %.12g, gap %.3g", t + 1, value, gap)
    q = _ScaleToBudget(q, problem.k)
    return ConcaveSolution(FractionalSecondStage(dict(zip(problem.items, q.tolist()))), value, gap, t + 1, history)


def _ScaleToBudget(q: np.ndarray, k: float) -> np.ndarray:
    # floating drift only; FW iterates are convex combinations of feasible points
    total = float(q.sum())
    if total > k:
        q = q * (k / total)
    return q
