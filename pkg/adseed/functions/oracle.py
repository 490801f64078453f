import threading

from typing import Any, Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from ..core.error import InputError
from ..core.internal import *

# (weight, member column indices, capacity)
Part = Tuple[float, np.ndarray, int]


"""
" class Oracle. value oracle of a normalized monotone submodular function
" over a fixed ground set; rows of a batch are sets given as boolean masks.
"""
class Oracle:
    def __init__(self, ground: Sequence[str]):
        self.__ground = tuple(ground)
        self.__index = {y: i for i, y in enumerate(self.__ground)}
        self.__queries = 0
        self.__lock = threading.Lock()

    def Ground(self) -> Tuple[str, ...]:
        return self.__ground

    def Size(self) -> int:
        return len(self.__ground)

    def Index(self, y: str) -> int:
        i = self.__index.get(y)
        if i is None:
            raise InputError(f"unknown neighbor id: {y}", ADSEED_ERR_INPUT_NEIGHBOR)
        return i

    def Indices(self, ids: Iterable[str]) -> np.ndarray:
        return np.array([self.Index(y) for y in ids], dtype=np.int64)

    def Mask(self, ids: Iterable[str]) -> np.ndarray:
        mask = np.zeros(len(self.__ground), dtype=bool)
        for y in ids:
            mask[self.Index(y)] = True
        return mask

    def Value(self, ids: Iterable[str]) -> float:
        return float(self.ValueBatch(self.Mask(ids)[None, :])[0])

    def Marginal(self, base: Iterable[str], e: str) -> float:
        mask = self.Mask(base)
        i = self.Index(e)
        if mask[i]:
            return 0.0
        rows = np.stack([mask, mask])
        rows[1, i] = True
        values = self.ValueBatch(rows)
        return max(0.0, float(values[1] - values[0]))

    def ValueBatch(self, masks: np.ndarray) -> np.ndarray:
        masks = np.asarray(masks, dtype=bool)
        if masks.ndim != 2 or masks.shape[1] != len(self.__ground):
            raise InputError(f"batch shape {masks.shape} does not match ground size {len(self.__ground)}",
                             ADSEED_ERR_INPUT_PARAMETER)
        with self.__lock:
            self.__queries += masks.shape[0]
        return self._EvaluateBatch(masks)

    def HasClosedForm(self) -> bool:
        return False

    def Multilinear(self, x: np.ndarray) -> float:
        return float(self.MultilinearBatch(np.asarray(x, dtype=float)[None, :])[0])

    def MultilinearBatch(self, x: np.ndarray) -> np.ndarray:
        """
        E[f(R)] where R holds each column independently with probability x;
        one value per row of x.
        """
        if not self.HasClosedForm():
            raise InputError(f"{type(self).__name__} has no closed-form multilinear extension",
                             ADSEED_ERR_INPUT_FUNCTION)
        x = np.asarray(x, dtype=float)
        with self.__lock:
            self.__queries += x.shape[0]
        return self._MultilinearBatch(x)

    def MultilinearGradient(self, x: np.ndarray) -> np.ndarray:
        if not self.HasClosedForm():
            raise InputError(f"{type(self).__name__} has no closed-form multilinear extension",
                             ADSEED_ERR_INPUT_FUNCTION)
        return self._MultilinearGradient(np.asarray(x, dtype=float))

    def Terms(self) -> Optional[List[Part]]:
        return None

    def Descriptor(self) -> Dict[str, Any]:
        raise NotImplementedError

    @property
    def QueryCount(self) -> int:
        return self.__queries

    def ResetQueryCount(self):
        with self.__lock:
            self.__queries = 0

    def _CountQueries(self, count: int):
        with self.__lock:
            self.__queries += count

    def _EvaluateBatch(self, masks: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def _MultilinearBatch(self, x: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def _MultilinearGradient(self, x: np.ndarray) -> np.ndarray:
        raise NotImplementedError
