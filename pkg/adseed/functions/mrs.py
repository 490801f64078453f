from typing import Any, Dict, List, Mapping, Sequence

import numpy as np
import scipy.sparse

from ..core.error import InputError
from ..core.internal import *
from .function_api import *
from .oracle import Oracle, Part


def TruncatedCountDistribution(x: np.ndarray, capacity: int) -> np.ndarray:
    """
    Poisson-binomial distribution of the number of included columns of x
    (rows are independent problems), truncated to the first `capacity`
    values: out[r, j] = Pr[N_r = j] for j < capacity.
    """
    dist = np.zeros((x.shape[0], capacity))
    dist[:, 0] = 1.0
    for j in range(x.shape[1]):
        xj = x[:, j:j + 1]
        shifted = np.zeros_like(dist)
        shifted[:, 1:] = dist[:, :-1]
        dist = dist * (1.0 - xj) + shifted * xj
    return dist


def ExpectedTruncatedCount(x: np.ndarray, capacity: int) -> np.ndarray:
    # E[min(capacity, N)]
    dist = TruncatedCountDistribution(x, capacity)
    return dist @ np.arange(capacity) + capacity * (1.0 - dist.sum(axis=1))


def TruncatedCountGradient(x: np.ndarray, capacity: int) -> np.ndarray:
    """
    d E[min(capacity, N)] / d x_i = Pr[N without i <= capacity - 1], for one
    probability vector x, from prefix and suffix distributions.
    """
    m = len(x)
    pre = np.zeros((m + 1, capacity))
    suf = np.zeros((m + 1, capacity))
    pre[0, 0] = 1.0
    suf[m, 0] = 1.0
    for i in range(m):
        pre[i + 1] = pre[i] * (1.0 - x[i])
        pre[i + 1, 1:] += pre[i, :-1] * x[i]
    for i in range(m - 1, -1, -1):
        suf[i] = suf[i + 1] * (1.0 - x[i])
        suf[i, 1:] += suf[i + 1, :-1] * x[i]
    tail = np.cumsum(suf[1:], axis=1)[:, ::-1]
    return (pre[:m] * tail).sum(axis=1)


"""
" class PartitionOracle. f(T) = sum over parts of weight * min(capacity, |T & part|).
"""
class PartitionOracle(Oracle):
    def __init__(self, ground: Sequence[str], parts: List[Part]):
        super().__init__(ground)
        self.__parts = [(float(w), np.asarray(members, dtype=np.int64), int(c)) for w, members, c in parts]
        for w, members, c in self.__parts:
            if w < 0 or c < 1:
                raise InputError(f"part weight must be >= 0 and capacity >= 1 (got {w}, {c})",
                                 ADSEED_ERR_INPUT_FUNCTION)

        rows, cols = [], []
        for u, (_, members, _) in enumerate(self.__parts):
            rows.extend([u] * len(members))
            cols.extend(members.tolist())
        self.__incidence = scipy.sparse.csr_matrix(
            (np.ones(len(rows)), (rows, cols)), shape=(len(self.__parts), self.Size()))
        self.__weights = np.array([w for w, _, _ in self.__parts])
        self.__capacities = np.array([c for _, _, c in self.__parts], dtype=float)
        self.__unit = np.flatnonzero(self.__capacities == 1)
        self.__wide = np.flatnonzero(self.__capacities > 1)

    def Terms(self) -> List[Part]:
        return list(self.__parts)

    def HasClosedForm(self) -> bool:
        return True

    def _EvaluateBatch(self, masks: np.ndarray) -> np.ndarray:
        counts = (self.__incidence @ masks.T.astype(float)).T
        return np.minimum(counts, self.__capacities) @ self.__weights

    def _MultilinearBatch(self, x: np.ndarray) -> np.ndarray:
        values = np.zeros(x.shape[0])
        if len(self.__unit):
            logMiss = np.log(np.maximum(1.0 - x, 1e-300))
            unit = self.__incidence[self.__unit]
            covered = 1.0 - np.exp((unit @ logMiss.T).T)
            values += covered @ self.__weights[self.__unit]
        for u in self.__wide:
            w, members, c = self.__parts[u]
            values += w * ExpectedTruncatedCount(x[:, members], c)
        return values

    def _MultilinearGradient(self, x: np.ndarray) -> np.ndarray:
        grad = np.zeros(self.Size())
        if len(self.__unit):
            logMiss = np.log(np.maximum(1.0 - x, 1e-300))
            unit = self.__incidence[self.__unit].tocoo()
            total = unit @ logMiss
            # product over the other members of each part containing i
            others = np.exp(total[unit.row] - logMiss[unit.col]) * self.__weights[self.__unit][unit.row]
            grad += np.bincount(unit.col, weights=others, minlength=self.Size())
        for u in self.__wide:
            w, members, c = self.__parts[u]
            grad[members] += w * TruncatedCountGradient(x[members], c)
        return grad


"""
" class MrsOracle. weighted sum of partition-matroid ranks.
"""
class MrsOracle(PartitionOracle):
    def __init__(self, ground: Sequence[str], terms: Sequence[Mapping[str, Any]]):
        self.__terms = [dict(term) for term in terms]
        index = {y: i for i, y in enumerate(ground)}
        parts = []
        for t, term in enumerate(self.__terms):
            weight = float(term.get("weight", 1.0))
            seen = set()
            for part in term.get("parts", ()):
                members = [str(y) for y in part["members"]]
                unknown = [y for y in members if y not in index]
                if unknown:
                    raise InputError(f"mrs term {t} references unknown neighbors {sorted(unknown)}",
                                     ADSEED_ERR_INPUT_FUNCTION)
                if seen.intersection(members):
                    raise InputError(f"mrs term {t} has overlapping parts", ADSEED_ERR_INPUT_FUNCTION)
                seen.update(members)
                parts.append((weight, [index[y] for y in members], int(part.get("capacity", 1))))
        super().__init__(ground, parts)

    def Descriptor(self) -> Dict[str, Any]:
        return {"type": FUNCTION_TYPE_MRS, "terms": self.__terms}
