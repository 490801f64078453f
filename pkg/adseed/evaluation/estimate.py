import math

from dataclasses import dataclass, asdict
from typing import Any, Callable, Dict

import numpy as np

from ..core.config import GetConfig
from ..utils.stream import Stream
from ..utils.thread import ParallelMap


"""
" class Estimate
"""
@dataclass(frozen=True)
class Estimate:
    mean: float
    std_error: float
    samples: int
    exact: bool

    def Lower(self, sigmas: float = 3.0) -> float:
        return self.mean - sigmas * self.std_error

    def Upper(self, sigmas: float = 3.0) -> float:
        return self.mean + sigmas * self.std_error

    def ToDict(self) -> Dict[str, Any]:
        return asdict(self)


def ExactEstimate(value: float) -> Estimate:
    return Estimate(float(value), 0.0, 0, True)


def SampleEstimate(values: np.ndarray) -> Estimate:
    values = np.asarray(values, dtype=float)
    n = len(values)
    if n == 0:
        return Estimate(0.0, 0.0, 0, False)
    std = float(values.std(ddof=1)) if n > 1 else 0.0
    return Estimate(float(values.mean()), std / math.sqrt(n), n, False)


"""
" function MonteCarlo
" Draws `samples` values in fixed-size chunks; chunk c owns stream.Derive(c)
" and results are concatenated in chunk order, so the estimate is the same
" for any worker count.
"""
def MonteCarlo(sampleChunk: Callable[[Stream, int, int], np.ndarray], samples: int, stream: Stream,
               chunk: int = None, workers: int = None) -> Estimate:
    config = GetConfig()
    chunk = config.mc_chunk if chunk is None else chunk
    workers = config.threads if workers is None else workers

    sizes = [min(chunk, samples - start) for start in range(0, samples, chunk)]
    values = ParallelMap(lambda c: sampleChunk(stream.Derive(c), c * chunk, sizes[c]), range(len(sizes)), workers)
    return SampleEstimate(np.concatenate(values) if values else np.zeros(0))
