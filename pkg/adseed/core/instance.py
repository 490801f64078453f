import math
import logging

from dataclasses import dataclass, field
from functools import cached_property
from typing import Any, Dict, FrozenSet, Iterable, Iterator, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from ..utils.stream import Stream
from .config import GetConfig
from .error import CapExceededError, InputError
from .internal import *

logger = logging.getLogger("adseed.core")


"""
" class Instance
"""
@dataclass(frozen=True)
class Instance:
    x_nodes: Tuple[str, ...]
    neighbors: Mapping[str, Tuple[str, ...]]
    probabilities: Mapping[str, float]
    budget: float
    function: Optional[Mapping[str, Any]] = field(default=None, compare=True)

    @cached_property
    def ground(self) -> Tuple[str, ...]:
        # N(X) in first-appearance order over x_nodes
        seen = {}
        for x in self.x_nodes:
            for y in self.neighbors.get(x, ()):
                seen.setdefault(y, None)
        return tuple(seen)

    @cached_property
    def index(self) -> Dict[str, int]:
        return {y: i for i, y in enumerate(self.ground)}

    @cached_property
    def parents(self) -> Dict[str, Tuple[str, ...]]:
        parents = {}
        for x in self.x_nodes:
            for y in self.neighbors.get(x, ()):
                parents.setdefault(y, []).append(x)
        return {y: tuple(xs) for y, xs in parents.items()}

    @cached_property
    def p(self) -> np.ndarray:
        return np.array([float(self.probabilities[y]) for y in self.ground], dtype=float)

    def Ground(self) -> Tuple[str, ...]:
        return self.ground

    def Probability(self, y: str) -> float:
        return float(self.probabilities[y])

    def NeighborsOf(self, first: Iterable[str]) -> FrozenSet[str]:
        result = set()
        for x in first:
            result.update(self.neighbors.get(x, ()))
        return frozenset(result)

    def ExpectedCost(self, second: Iterable[str]) -> float:
        return float(sum(self.probabilities[y] for y in second))

    def Mask(self, ids: Iterable[str]) -> np.ndarray:
        mask = np.zeros(len(self.ground), dtype=bool)
        for y in ids:
            i = self.index.get(y)
            if i is None:
                raise InputError(f"unknown neighbor id: {y}", ADSEED_ERR_INPUT_NEIGHBOR)
            mask[i] = True
        return mask

    def Ids(self, mask: np.ndarray) -> FrozenSet[str]:
        return frozenset(self.ground[i] for i in np.flatnonzero(mask))


def CreateInstance(xNodes: Sequence[str], neighbors: Mapping[str, Sequence[str]],
                   probabilities: Mapping[str, float], budget: float,
                   function: Optional[Mapping[str, Any]] = None) -> Instance:
    return Instance(
        x_nodes=tuple(str(x) for x in xNodes),
        neighbors={str(x): tuple(str(y) for y in ys) for x, ys in neighbors.items()},
        probabilities={str(y): float(v) for y, v in probabilities.items()},
        budget=float(budget),
        function=function,
    )


"""
" class Realization
"""
@dataclass(frozen=True)
class Realization:
    present: FrozenSet[str]


"""
" function ValidateInstance
"""
def ValidateInstance(inst: Instance) -> List[str]:
    violations = []

    if len(set(inst.x_nodes)) != len(inst.x_nodes):
        violations.append("duplicate first-stage node ids")

    for x in inst.neighbors:
        if x not in inst.x_nodes:
            violations.append(f"neighbor list for unknown first-stage node '{x}'")

    for x in inst.x_nodes:
        ys = inst.neighbors.get(x, ())
        if len(set(ys)) != len(ys):
            violations.append(f"duplicate neighbor ids under first-stage node '{x}'")

    for y in inst.ground:
        if y in inst.x_nodes:
            violations.append(f"neighbor '{y}' is also a first-stage node")
        if y not in inst.probabilities:
            violations.append(f"neighbor '{y}' has no probability")
            continue
        p = inst.probabilities[y]
        if not (isinstance(p, (int, float)) and math.isfinite(p) and 0.0 < p <= 1.0):
            violations.append(f"neighbor '{y}' probability {p!r} outside (0,1]")

    if not (math.isfinite(inst.budget) and inst.budget >= 1.0):
        violations.append(f"budget {inst.budget!r} below 1")

    return violations


"""
" function SampleRealization
"""
def SampleRealization(inst: Instance, stream: Stream) -> Realization:
    present = SampleRealizationMatrix(inst.p, 1, stream.rng)[0]
    return Realization(inst.Ids(present))


def SampleRealizationMatrix(p: np.ndarray, samples: int, rng: np.random.Generator) -> np.ndarray:
    # one uniform per (sample, ground element) in fixed column order
    return rng.random((samples, len(p))) < p


"""
" function EnumerateRealizations
"""
def EnumerateRealizations(inst: Instance, ground: Iterable[str], limit: int = None) -> Iterator[Tuple[Realization, float]]:
    ids = sorted(set(ground), key=lambda y: inst.index.get(y, -1))
    masks, probs = EnumerateRealizationMatrix(inst, ids, limit)
    for row, prob in zip(masks, probs):
        yield Realization(frozenset(y for y, bit in zip(ids, row) if bit)), float(prob)


def CheckEnumerationLimit(size: int, limit: int = None):
    limit = GetConfig().enum_limit if limit is None else limit
    if size > limit:
        raise CapExceededError(
            f"exact enumeration over {size} ground elements exceeds limit {limit} (2^{size} realizations)",
            ADSEED_ERR_CAP_ENUMERATION)


def SubsetBits(n: int) -> np.ndarray:
    codes = np.arange(1 << n, dtype=np.int64)
    return ((codes[:, None] >> np.arange(n, dtype=np.int64)) & 1).astype(bool)


def EnumerateRealizationMatrix(inst: Instance, ids: Sequence[str], limit: int = None) -> Tuple[np.ndarray, np.ndarray]:
    """
    All 2^n realizations of `ids` as a (2^n, n) boolean matrix with their
    probabilities. Row order is the binary count with ids[0] as the low bit.
    """
    ids = list(ids)
    CheckEnumerationLimit(len(ids), limit)
    for y in ids:
        if y not in inst.probabilities:
            raise InputError(f"unknown neighbor id: {y}", ADSEED_ERR_INPUT_NEIGHBOR)

    p = np.array([inst.probabilities[y] for y in ids], dtype=float)
    bits = SubsetBits(len(ids))
    probs = np.prod(np.where(bits, p, 1.0 - p), axis=1) if ids else np.ones(1)
    return bits, probs


def IterRealizationChunks(p: np.ndarray, limit: int = None, chunk: int = 1 << 16) -> Iterator[Tuple[np.ndarray, np.ndarray]]:
    """
    Chunked form of EnumerateRealizationMatrix over a probability vector:
    yields (bits, probabilities) with at most `chunk` rows at a time.
    """
    n = len(p)
    CheckEnumerationLimit(n, limit)
    shifts = np.arange(n, dtype=np.int64)
    for start in range(0, 1 << n, chunk):
        codes = np.arange(start, min(start + chunk, 1 << n), dtype=np.int64)
        bits = ((codes[:, None] >> shifts) & 1).astype(bool)
        yield bits, np.prod(np.where(bits, p, 1.0 - p), axis=1)
