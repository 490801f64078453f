from typing import Tuple

import numpy as np


"""
" class Stream. a seeded random stream; Derive() gives independent substreams
" keyed by (seed, *key), so parallel draws never depend on scheduling.
"""
class Stream:
    def __init__(self, seed: int, key: Tuple[int, ...] = ()):
        self.__seed = int(seed)
        self.__key = tuple(int(k) for k in key)
        self.__rng = None

    @property
    def seed(self) -> int:
        return self.__seed

    @property
    def key(self) -> Tuple[int, ...]:
        return self.__key

    @property
    def rng(self) -> np.random.Generator:
        if self.__rng is None:
            self.__rng = np.random.default_rng(np.random.SeedSequence([self.__seed, *self.__key]))
        return self.__rng

    def Derive(self, *index: int) -> "Stream":
        return Stream(self.__seed, self.__key + tuple(index))

    def __repr__(self):
        return f"Stream(seed={self.__seed}, key={self.__key})"


def CreateStream(seed: int = 0) -> Stream:
    return Stream(seed)
