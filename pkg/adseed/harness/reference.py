import math

from dataclasses import dataclass, asdict
from typing import Any, Dict, Optional

from scipy.stats import binom

from ..core.error import InputError
from ..core.internal import *
from .harness_api import *


"""
" class GapReference
"""
@dataclass(frozen=True)
class GapReference:
    family: str
    parameter: float
    adaptive_value: float
    comparison_value: float
    ratio: float
    # m -> infinity values, for the locally-adaptive family only
    limit_adaptive_value: Optional[float] = None
    limit_comparison_value: Optional[float] = None
    limit_ratio: Optional[float] = None

    def ToDict(self) -> Dict[str, Any]:
        return {k: v for k, v in asdict(self).items() if v is not None}


def GapNaSize(delta: float) -> int:
    return math.ceil(1.0 / (delta * delta) - ADSEED_BUDGET_TOL)


"""
" function GapNaReference
" The adaptive policy seeds x and then any realized neighbor; the best
" non-adaptive policy seeds x and floor(1/delta) neighbors.
"""
def GapNaReference(delta: float) -> GapReference:
    if not 0.0 < delta <= 1.0:
        raise InputError(f"delta must lie in (0,1] (got {delta})")
    adaptive = 1.0 - (1.0 - delta) ** GapNaSize(delta)
    nonadaptive = 1.0 - (1.0 - delta) ** math.floor(1.0 / delta + ADSEED_BUDGET_TOL)
    return GapReference(GAP_FAMILY_NA, float(delta), adaptive, nonadaptive, nonadaptive / adaptive)


"""
" function GapLaReference
" Finite-m values: the adaptive policy reaches 1 - (1/2)(1-1/m)^m, while no
" locally-adaptive policy beats 1 - (1/2)(1-1/(2m))^m. Their Poisson limits
" are reported alongside.
"""
def GapLaReference(m: int) -> GapReference:
    m = int(m)
    if m < 2:
        raise InputError(f"m must be >= 2 (got {m})")
    adaptive = 1.0 - 0.5 * (1.0 - 1.0 / m) ** m
    local = 1.0 - 0.5 * (1.0 - 1.0 / (2.0 * m)) ** m
    limitAdaptive = 1.0 - 0.5 * math.exp(-1.0)
    limitLocal = 1.0 - 0.5 * math.exp(-0.5)
    return GapReference(GAP_FAMILY_LA, float(m), adaptive, local, local / adaptive,
                        limitAdaptive, limitLocal, limitLocal / limitAdaptive)


"""
" class HardnessBounds
"""
@dataclass(frozen=True)
class HardnessBounds:
    k: float
    completeness: float
    soundness: float
    ratio: float

    def ToDict(self) -> Dict[str, Any]:
        return asdict(self)


def HardnessReference(k: float) -> HardnessBounds:
    """
    Limits as l grows: a planted clique bought whole is worth
    1 - (k/2+1)e^-k, while a sparse graph gives 1 - e^(-k/2) under any bid.
    """
    if k <= 0.0:
        raise InputError(f"k must be > 0 (got {k})")
    completeness = 1.0 - (k / 2.0 + 1.0) * math.exp(-k)
    soundness = 1.0 - math.exp(-k / 2.0)
    return HardnessBounds(float(k), completeness, soundness, soundness / completeness)


def CliqueExpectedValue(l: int, k: float) -> float:
    # |T| ~ Binomial(l, k/l); f is 0 on the empty set, 1/2 on a single vertex and 1 on any edge
    dist = binom(l, k / l)
    return float(1.0 - dist.pmf(0) - 0.5 * dist.pmf(1))


def EmptyGraphExpectedValue(l: int, k: float) -> float:
    # E[1 - 2^-|T|] with independent vertices
    return 1.0 - (1.0 - k / (2.0 * l)) ** l
