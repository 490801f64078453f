import heapq
import itertools
import logging

from typing import FrozenSet, Iterable, Sequence

import numpy as np
from scipy.special import comb

from ..core.config import GetConfig
from ..core.error import CapExceededError, InputError
from ..core.internal import *
from ..functions.oracle import Oracle

logger = logging.getLogger("adseed.evaluation")

SECOND_STAGE_EXACT = "exact"
SECOND_STAGE_GREEDY = "greedy"

# rows handed to the oracle at once
BATCH_ROWS = 1 << 15
# cells of the (rows, candidates, ground) trial tensor in one greedy step
GREEDY_CELLS = 1 << 24
TIE_TOL = 1e-12


def SubsetCount(n: int, t: int) -> int:
    return int(comb(n, min(t, n), exact=True))


def _CheckSubsetCap(n: int, t: int, cap: int):
    count = SubsetCount(n, t)
    if count > cap:
        raise CapExceededError(f"exact second stage needs C({n},{min(t, n)}) = {count} subsets, cap is {cap}",
                               ADSEED_ERR_CAP_SUBSETS)


"""
" function SecondStageOpt
"""
def SecondStageOpt(oracle: Oracle, base: Iterable[str], candidates: Iterable[str], t: int,
                   mode: str = SECOND_STAGE_GREEDY, cap: int = None) -> FrozenSet[str]:
    if t < 0:
        raise InputError(f"second-stage budget must be >= 0 (got {t})")
    candidates = sorted(set(candidates))
    if t == 0 or not candidates:
        return frozenset()

    baseMask = oracle.Mask(base)
    cols = oracle.Indices(candidates)

    if mode == SECOND_STAGE_EXACT:
        cap = GetConfig().subset_cap if cap is None else cap
        _CheckSubsetCap(len(candidates), t, cap)
        size = min(t, len(candidates))
        bestValue, best = -np.inf, None
        # combinations come in lexicographic order, so the first maximum wins ties
        combos = itertools.combinations(range(len(candidates)), size)
        while True:
            chunk = list(itertools.islice(combos, BATCH_ROWS))
            if not chunk:
                break
            rows = np.repeat(baseMask[None, :], len(chunk), axis=0)
            picks = cols[np.array(chunk)]
            rows[np.arange(len(chunk))[:, None], picks] = True
            values = oracle.ValueBatch(rows)
            i = int(np.argmax(values))
            if values[i] > bestValue + TIE_TOL:
                bestValue, best = values[i], chunk[i]
        return frozenset(candidates[j] for j in best)

    if mode == SECOND_STAGE_GREEDY:
        return frozenset(candidates[j] for j in _LazyGreedy(oracle, baseMask, cols, t))

    raise InputError(f"unknown second-stage mode '{mode}'")


def _LazyGreedy(oracle: Oracle, baseMask: np.ndarray, cols: np.ndarray, t: int) -> Sequence[int]:
    current = baseMask.copy()
    currentValue = float(oracle.ValueBatch(current[None, :])[0])

    rows = np.repeat(current[None, :], len(cols), axis=0)
    rows[np.arange(len(cols)), cols] = True
    gains = oracle.ValueBatch(rows) - currentValue

    # (negated upper bound, candidate position); positions follow id order
    heap = [(-gain, j) for j, gain in enumerate(gains) if not baseMask[cols[j]]]
    heapq.heapify(heap)

    chosen = []
    while heap and len(chosen) < t:
        _, j = heapq.heappop(heap)
        row = current.copy()
        row[cols[j]] = True
        gain = float(oracle.ValueBatch(row[None, :])[0]) - currentValue
        if heap:
            nextBound, nextJ = -heap[0][0], heap[0][1]
            if gain < nextBound - TIE_TOL or (gain <= nextBound + TIE_TOL and nextJ < j):
                heapq.heappush(heap, (-gain, j))
                continue
        if gain <= TIE_TOL:
            break
        chosen.append(j)
        current = row
        currentValue += gain
    return chosen


"""
" function SelectBatch
" Per-row second-stage choice for many realizations at once. Row r may pick
" at most t of the candidate columns marked in available[r], on top of
" base[r]. Returns the picks only, as full-width masks.
"""
def SelectBatch(oracle: Oracle, base: np.ndarray, cols: np.ndarray, available: np.ndarray, t: int,
                mode: str, cap: int = None) -> np.ndarray:
    rows = base.shape[0]
    picks = np.zeros_like(base)
    if t <= 0 or len(cols) == 0 or rows == 0:
        return picks
    available = available & ~base[:, cols]

    # identical (base, available) rows share one answer
    key = np.concatenate([base, available], axis=1)
    unique, inverse = np.unique(key, axis=0, return_inverse=True)
    inverse = np.asarray(inverse).reshape(-1)
    uBase = unique[:, :base.shape[1]]
    uAvail = unique[:, base.shape[1]:]

    if mode == SECOND_STAGE_EXACT:
        cap = GetConfig().exact_realization_cap if cap is None else cap
        _CheckSubsetCap(len(cols), t, cap)
        # f is monotone: a row with at most t available candidates takes them all
        uPicks = uAvail.copy()
        crowded = np.flatnonzero(uAvail.sum(axis=1) > t)
        if len(crowded):
            uPicks[crowded] = _ExactBatch(oracle, uBase[crowded], cols, uAvail[crowded], min(t, len(cols)))
    elif mode == SECOND_STAGE_GREEDY:
        uPicks = _GreedyBatch(oracle, uBase, cols, uAvail, t)
    else:
        raise InputError(f"unknown second-stage mode '{mode}'")

    picks[:, cols] = uPicks[inverse]
    return picks


def _ExactBatch(oracle: Oracle, base: np.ndarray, cols: np.ndarray, available: np.ndarray, size: int) -> np.ndarray:
    # any best available subset is (combo & available) for some full-size combo
    combos = np.array(list(itertools.combinations(range(len(cols)), size)), dtype=np.int64)
    members = np.zeros((len(combos), len(cols)), dtype=bool)
    members[np.arange(len(combos))[:, None], combos] = True

    rows = base.shape[0]
    bestValue = np.full(rows, -np.inf)
    best = np.zeros((rows, len(cols)), dtype=bool)
    step = max(1, BATCH_ROWS // max(1, rows))
    for start in range(0, len(combos), step):
        chosen = members[start:start + step][None, :, :] & available[:, None, :]
        full = np.repeat(base[:, None, :], chosen.shape[1], axis=1)
        full[:, :, cols] |= chosen
        values = oracle.ValueBatch(full.reshape(-1, base.shape[1])).reshape(rows, -1)
        i = np.argmax(values, axis=1)
        top = values[np.arange(rows), i]
        better = top > bestValue + TIE_TOL
        bestValue[better] = top[better]
        best[better] = chosen[np.flatnonzero(better), i[better]]
    return best


def _GreedyBatch(oracle: Oracle, base: np.ndarray, cols: np.ndarray, available: np.ndarray, t: int) -> np.ndarray:
    # each step tries every column on every row; keep rows * width * ground bounded
    step = max(1, GREEDY_CELLS // max(1, len(cols) * base.shape[1]))
    if base.shape[0] > step:
        return np.concatenate([_GreedyBatch(oracle, base[s:s + step], cols, available[s:s + step], t)
                               for s in range(0, base.shape[0], step)])
    rows, width = base.shape[0], len(cols)
    current = base.copy()
    currentValue = oracle.ValueBatch(current)
    picked = np.zeros((rows, width), dtype=bool)
    active = np.ones(rows, dtype=bool)
    open_ = available & ~base[:, cols]

    for _ in range(t):
        live = np.flatnonzero(active & open_.any(axis=1))
        if len(live) == 0:
            break
        trial = np.repeat(current[live][:, None, :], width, axis=1)
        trial[:, np.arange(width), cols] = True
        gains = oracle.ValueBatch(trial.reshape(-1, current.shape[1])).reshape(len(live), width) - currentValue[live][:, None]
        gains[~open_[live]] = -np.inf
        top = gains.max(axis=1)
        # lowest column position among near-ties; cols follow id order
        j = np.argmax(gains >= top[:, None] - TIE_TOL, axis=1)
        stop = top <= TIE_TOL
        active[live[stop]] = False
        go = live[~stop]
        jGo = j[~stop]
        picked[go, jGo] = True
        open_[go, jGo] = False
        current[go, cols[jGo]] = True
        currentValue[go] += top[~stop]
    return picked
