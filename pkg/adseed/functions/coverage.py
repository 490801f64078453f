from typing import Any, Dict, Iterable, Mapping, Sequence

from ..core.error import InputError
from ..core.internal import *
from .function_api import *
from .mrs import PartitionOracle


"""
" class CoverageOracle
" f(T) = total weight of universe elements covered by T. Each universe
" element is a capacity-1 part made of the neighbors covering it.
"""
class CoverageOracle(PartitionOracle):
    def __init__(self, ground: Sequence[str], universe: Mapping[str, float], covers: Mapping[str, Iterable[str]]):
        self.__universe = {str(u): float(w) for u, w in universe.items()}
        self.__covers = {str(y): sorted(str(u) for u in us) for y, us in covers.items()}

        ground = tuple(ground)
        index = {y: i for i, y in enumerate(ground)}
        coverers = {u: [] for u in self.__universe}
        for y, us in self.__covers.items():
            if y not in index:
                raise InputError(f"coverage covers unknown neighbor '{y}'", ADSEED_ERR_INPUT_NEIGHBOR)
            for u in us:
                if u not in coverers:
                    raise InputError(f"neighbor '{y}' covers unknown element '{u}'", ADSEED_ERR_INPUT_FUNCTION)
                coverers[u].append(index[y])

        parts = [(w, coverers[u], 1) for u, w in self.__universe.items() if coverers[u]]
        super().__init__(ground, parts)

    def Universe(self) -> Dict[str, float]:
        return dict(self.__universe)

    def Covers(self, y: str):
        return frozenset(self.__covers.get(y, ()))

    def Descriptor(self) -> Dict[str, Any]:
        return {"type": FUNCTION_TYPE_COVERAGE, "universe": dict(self.__universe), "covers": dict(self.__covers)}
