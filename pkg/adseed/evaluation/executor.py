import math
import logging

from typing import FrozenSet, List, Optional

import numpy as np
from scipy.special import comb

from ..core.config import GetConfig
from ..core.error import InputError
from ..core.instance import Instance, Realization
from ..core.internal import *
from ..core.policy import *
from ..functions.oracle import Oracle
from ..utils.stream import Stream
from .second_stage import SECOND_STAGE_EXACT, SECOND_STAGE_GREEDY, SelectBatch

logger = logging.getLogger("adseed.evaluation")

# what a block's optimizer sees besides its own realized neighbors
CONDITIONING_BLOCK = "block"
CONDITIONING_FULL = "full"
CONDITIONINGS = (CONDITIONING_BLOCK, CONDITIONING_FULL)


"""
" class AdaptiveExecutor. maps realizations of N(X) to seeded sets; rows of
" `realized` are full-width masks over the oracle's ground set.
"""
class AdaptiveExecutor:
    def First(self) -> FrozenSet[str]:
        raise NotImplementedError

    def ExecuteBatch(self, realized: np.ndarray, stream: Optional[Stream] = None) -> np.ndarray:
        raise NotImplementedError

    def UsesCoins(self) -> bool:
        return False


def ResolveBlockMode(block: AdaptiveBlockSpec, candidates: int, cap: int = None) -> str:
    if block.mode in (SECOND_STAGE_EXACT, SECOND_STAGE_GREEDY):
        return block.mode
    cap = GetConfig().exact_realization_cap if cap is None else cap
    t = min(block.second_budget, candidates)
    return SECOND_STAGE_EXACT if comb(candidates, t, exact=True) <= cap else SECOND_STAGE_GREEDY


"""
" class PolicyExecutor
" Runs a locally-adaptive policy block by block: each block sees the
" realized part of N(S_b) and the picks of the blocks before it.
" With CONDITIONING_FULL a block also sees the rest of the realization,
" through what the later blocks would pick from it; it then optimizes on
" top of those anticipated picks. Anticipated picks are never seeded.
"""
class PolicyExecutor(AdaptiveExecutor):
    def __init__(self, inst: Instance, oracle: Oracle, policy: LocallyAdaptivePolicy,
                 conditioning: str = CONDITIONING_BLOCK):
        if conditioning not in CONDITIONINGS:
            raise InputError(f"unknown conditioning '{conditioning}'", ADSEED_ERR_INPUT_PARAMETER)
        self.__inst = inst
        self.__oracle = oracle
        self.__policy = policy
        self.__conditioning = conditioning
        self.__first = policy.First()
        self.__blocks = []
        for block in policy.blocks:
            if block.mode not in BLOCK_MODES:
                raise InputError(f"unknown block mode '{block.mode}'", ADSEED_ERR_INPUT_POLICY)
            if block.mode == BLOCK_MODE_CRS:
                cols = oracle.Indices(sorted(block.second or ()))
            else:
                cols = oracle.Indices(sorted(inst.NeighborsOf(block.first)))
            self.__blocks.append((block, cols))

    def Policy(self) -> LocallyAdaptivePolicy:
        return self.__policy

    def Conditioning(self) -> str:
        return self.__conditioning

    def First(self) -> FrozenSet[str]:
        return self.__first

    def UsesCoins(self) -> bool:
        return any(block.mode == BLOCK_MODE_CRS for block, _ in self.__blocks)

    def ExecuteBatch(self, realized: np.ndarray, stream: Optional[Stream] = None) -> np.ndarray:
        seeded = np.zeros_like(realized, dtype=bool)
        for picks in self.ExecuteBlocksBatch(realized, stream):
            seeded |= picks
        return seeded

    def ExecuteBlocksBatch(self, realized: np.ndarray, stream: Optional[Stream] = None) -> List[np.ndarray]:
        """
        The picks of every block, in block order, as full-width masks.
        """
        seeded = np.zeros_like(realized, dtype=bool)
        return self.__RunFrom(0, seeded, realized, stream, self.__conditioning)

    def __RunFrom(self, start: int, seeded: np.ndarray, realized: np.ndarray, stream: Optional[Stream],
                  conditioning: str) -> List[np.ndarray]:
        seeded = seeded.copy()
        result = []
        for b in range(start, len(self.__blocks)):
            block, cols = self.__blocks[b]
            picks = np.zeros_like(seeded)
            if len(cols) > 0 and block.second_budget > 0:
                base = seeded
                if conditioning == CONDITIONING_FULL and b + 1 < len(self.__blocks):
                    later = self.__RunFrom(b + 1, seeded, realized, stream, CONDITIONING_BLOCK)
                    base = seeded | np.logical_or.reduce(later)
                picks = self.__RunBlock(b, block, cols, base, realized, stream)
            seeded |= picks
            result.append(picks)
        return result

    def __RunBlock(self, b: int, block: AdaptiveBlockSpec, cols: np.ndarray, seeded: np.ndarray,
                   realized: np.ndarray, stream: Optional[Stream]) -> np.ndarray:
        if block.mode == BLOCK_MODE_CRS:
            if stream is None:
                raise InputError("crs blocks need a random stream", ADSEED_ERR_INPUT_PARAMETER)
            coins = stream.Derive(b).rng.random((realized.shape[0], len(cols)))
            kept = realized[:, cols] & (coins < block.keep_prob)
            limit = math.floor(block.cap + ADSEED_BUDGET_TOL)
            kept &= (kept.sum(axis=1) <= limit)[:, None]
            picks = np.zeros_like(seeded)
            picks[:, cols] = kept
            return picks
        mode = ResolveBlockMode(block, len(cols))
        return SelectBatch(self.__oracle, seeded, cols, realized[:, cols], block.second_budget, mode)

    def Execute(self, realization: Realization, stream: Optional[Stream] = None) -> FrozenSet[str]:
        realized = self.__oracle.Mask(y for y in realization.present if y in self.__inst.index)
        return self.__inst.Ids(self.ExecuteBatch(realized[None, :], stream)[0])

