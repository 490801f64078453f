from typing import Any, Dict, Iterable, List, Sequence, Tuple

import numpy as np

from ..core.error import InputError
from ..core.internal import *
from .function_api import *
from .mrs import PartitionOracle
from .oracle import Oracle


"""
" class AnyNonEmptyOracle. f(T) = 1 if T is not empty.
"""
class AnyNonEmptyOracle(PartitionOracle):
    def __init__(self, ground: Sequence[str]):
        ground = tuple(ground)
        super().__init__(ground, [(1.0, list(range(len(ground))), 1)] if ground else [])

    def Descriptor(self) -> Dict[str, Any]:
        return {"type": FUNCTION_TYPE_ANY_NONEMPTY}


"""
" class EdgeWitnessOracle
" f(T) = 1 if T contains both ends of some edge, else 1 - 2^-|T|.
"""
class EdgeWitnessOracle(Oracle):
    def __init__(self, ground: Sequence[str], edges: Iterable[Sequence[str]]):
        super().__init__(ground)
        pairs = set()
        for edge in edges:
            if len(edge) != 2:
                raise InputError(f"edge {edge!r} must have two endpoints", ADSEED_ERR_INPUT_FUNCTION)
            u, v = sorted((str(edge[0]), str(edge[1])))
            if u == v:
                raise InputError(f"self-loop on '{u}'", ADSEED_ERR_INPUT_FUNCTION)
            pairs.add((u, v))
        self.__edges = sorted(pairs)
        self.__u = self.Indices(u for u, _ in self.__edges)
        self.__v = self.Indices(v for _, v in self.__edges)
        self.__adjacency = {y: set() for y in self.Ground()}
        for u, v in self.__edges:
            self.__adjacency[u].add(v)
            self.__adjacency[v].add(u)

    def Edges(self) -> List[Tuple[str, str]]:
        return list(self.__edges)

    def HasEdge(self, ids: Iterable[str]) -> bool:
        ids = set(ids)
        self.Indices(ids)
        return any(self.__adjacency[y] & ids for y in ids)

    def Marginal(self, base: Iterable[str], e: str) -> float:
        # incremental: only e's adjacency is inspected against the base
        base = set(base)
        self.Indices(base)
        self.Index(e)
        if e in base:
            return 0.0
        self._CountQueries(2)
        if self.HasEdge(base):
            return 0.0
        if self.__adjacency[e] & base:
            return 2.0 ** -len(base)
        return 2.0 ** -(len(base) + 1)

    def _EvaluateBatch(self, masks: np.ndarray) -> np.ndarray:
        sizes = masks.sum(axis=1)
        values = 1.0 - np.exp2(-sizes.astype(float))
        if len(self.__edges):
            witnessed = (masks[:, self.__u] & masks[:, self.__v]).any(axis=1)
            values[witnessed] = 1.0
        return values

    def Descriptor(self) -> Dict[str, Any]:
        return {"type": FUNCTION_TYPE_EDGE_WITNESS, "edges": [list(edge) for edge in self.__edges]}


"""
" class ProductGapOracle
" f(T) = 1 - prod_x (1 - |T & {y_x}| / 2 - |T & Z_x| / (2 m^2)). Groups are
" disjoint and |Z_x| <= m^2, so every factor stays in [0, 1].
"""
class ProductGapOracle(Oracle):
    def __init__(self, ground: Sequence[str], groups: Sequence[Tuple[str, Sequence[str]]], m: int):
        super().__init__(ground)
        if m < 1:
            raise InputError(f"product_gap needs m >= 1 (got {m})", ADSEED_ERR_INPUT_FUNCTION)
        self.__m = int(m)
        self.__groups = []
        seen = set()
        for special, regular in groups:
            members = [special, *regular]
            if seen.intersection(members):
                raise InputError("product_gap groups must be disjoint", ADSEED_ERR_INPUT_FUNCTION)
            if len(regular) > m * m:
                raise InputError(f"group of '{special}' has {len(regular)} regular neighbors, more than m^2={m * m}",
                                 ADSEED_ERR_INPUT_FUNCTION)
            seen.update(members)
            self.__groups.append((self.Index(special), self.Indices(regular)))

    @property
    def m(self) -> int:
        return self.__m

    def HasClosedForm(self) -> bool:
        return True

    def __Factors(self, x: np.ndarray) -> np.ndarray:
        scale = 1.0 / (2.0 * self.__m * self.__m)
        factors = np.ones((x.shape[0], len(self.__groups)))
        for g, (special, regular) in enumerate(self.__groups):
            factors[:, g] = 1.0 - 0.5 * x[:, special] - scale * x[:, regular].sum(axis=1)
        return np.clip(factors, 0.0, 1.0)

    def _EvaluateBatch(self, masks: np.ndarray) -> np.ndarray:
        return 1.0 - self.__Factors(masks.astype(float)).prod(axis=1)

    # factors are affine in each coordinate, so expectations factor too
    def _MultilinearBatch(self, x: np.ndarray) -> np.ndarray:
        return 1.0 - self.__Factors(x).prod(axis=1)

    def _MultilinearGradient(self, x: np.ndarray) -> np.ndarray:
        factors = self.__Factors(x[None, :])[0]
        grad = np.zeros(self.Size())
        scale = 1.0 / (2.0 * self.__m * self.__m)
        for g, (special, regular) in enumerate(self.__groups):
            others = np.prod(np.delete(factors, g))
            grad[special] += 0.5 * others
            grad[regular] += scale * others
        return grad

    def Descriptor(self) -> Dict[str, Any]:
        return {"type": FUNCTION_TYPE_PRODUCT_GAP, "m": self.__m}
