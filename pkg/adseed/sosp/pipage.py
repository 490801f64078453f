import logging

import numpy as np

from ..core.policy import FractionalSecondStage
from .problem import SospProblem, ExactObjectiveBatch
from .sosp_api import *

logger = logging.getLogger("adseed.sosp")


def FractionalIndices(q: np.ndarray, p: np.ndarray, tol: float = PIPAGE_TOL) -> np.ndarray:
    return np.flatnonzero((q > tol) & (q < p - tol))


"""
" function PipageRound
" Moves mass between two fractional coordinates along e_i - e_j to the
" endpoint with the larger exact value (the exact value is convex along
" that line), until at most one coordinate is fractional.
"""
def PipageRound(problem: SospProblem, q, tol: float = PIPAGE_TOL) -> FractionalSecondStage:
    if isinstance(q, FractionalSecondStage):
        q = np.array([q.q[y] for y in problem.items])
    q = np.clip(np.asarray(q, dtype=float).copy(), 0.0, problem.p)
    p = problem.p

    moves = 0
    while True:
        fractional = FractionalIndices(q, p, tol)
        if len(fractional) <= 1:
            break
        i, j = fractional[0], fractional[1]
        up = min(p[i] - q[i], q[j])
        down = min(q[i], p[j] - q[j])
        plus, minus = q.copy(), q.copy()
        plus[i] += up
        plus[j] -= up
        minus[i] -= down
        minus[j] += down
        values = ExactObjectiveBatch(problem, np.stack([plus, minus]))
        q = plus if values[0] >= values[1] else minus
        # land exactly on the bound that was hit
        for c in (i, j):
            if q[c] <= tol:
                q[c] = 0.0
            elif q[c] >= p[c] - tol:
                q[c] = p[c]
        moves += 1

    logger.debug("[PipageRound] %d moves", moves)
    return FractionalSecondStage(dict(zip(problem.items, q.tolist())))
