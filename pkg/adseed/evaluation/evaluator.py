import logging

from typing import Iterable, Optional

import numpy as np

from ..core.config import GetConfig
from ..core.error import InfeasibleError, InputError
from ..core.instance import Instance, IterRealizationChunks, SampleRealizationMatrix
from ..core.internal import *
from ..core.policy import *
from ..functions.oracle import Oracle
from ..utils.stream import Stream, CreateStream
from .estimate import Estimate, ExactEstimate, MonteCarlo
from .executor import CONDITIONING_BLOCK, AdaptiveExecutor, PolicyExecutor

logger = logging.getLogger("adseed.evaluation")

METHOD_AUTO = "auto"
METHOD_EXACT = "exact-enum"
METHOD_CLOSED_FORM = "closed-form"
METHOD_MONTE_CARLO = "monte-carlo"

# seed used when a Monte Carlo method is asked for without a stream
DEFAULT_SEED = 0


def _Stream(stream: Optional[Stream]) -> Stream:
    return CreateStream(DEFAULT_SEED) if stream is None else stream


def _Samples(samples: Optional[int]) -> int:
    samples = GetConfig().mc_samples if samples is None else int(samples)
    if samples < 1:
        raise InputError(f"sample count must be >= 1 (got {samples})")
    return samples


"""
" function ValueNonAdaptive
" F(T) = sum over realizations R of p(R) f(T & R).
"""
def ValueNonAdaptive(inst: Instance, oracle: Oracle, second: Iterable[str], method: str = METHOD_AUTO,
                     samples: int = None, stream: Stream = None, limit: int = None) -> Estimate:
    cols = oracle.Indices(sorted(set(second)))
    if len(cols) == 0:
        return ExactEstimate(0.0)

    if method == METHOD_AUTO:
        limit_ = GetConfig().enum_limit if limit is None else limit
        if oracle.HasClosedForm():
            method = METHOD_CLOSED_FORM
        elif len(cols) <= limit_:
            method = METHOD_EXACT
        else:
            method = METHOD_MONTE_CARLO

    if method == METHOD_CLOSED_FORM:
        if not oracle.HasClosedForm():
            raise InputError(f"closed-form evaluation is not available for {type(oracle).__name__}",
                             ADSEED_ERR_INPUT_FUNCTION)
        x = np.zeros(oracle.Size())
        x[cols] = inst.p[cols]
        return ExactEstimate(oracle.Multilinear(x))

    if method == METHOD_EXACT:
        total = 0.0
        for bits, probs in IterRealizationChunks(inst.p[cols], limit):
            rows = np.zeros((bits.shape[0], oracle.Size()), dtype=bool)
            rows[:, cols] = bits
            total += float(probs @ oracle.ValueBatch(rows))
        return ExactEstimate(total)

    if method == METHOD_MONTE_CARLO:
        mask = np.zeros(oracle.Size(), dtype=bool)
        mask[cols] = True

        def sampleChunk(chunkStream: Stream, offset: int, size: int) -> np.ndarray:
            realized = SampleRealizationMatrix(inst.p, size, chunkStream.rng)
            return oracle.ValueBatch(realized & mask)

        return MonteCarlo(sampleChunk, _Samples(samples), _Stream(stream))

    raise InputError(f"unknown evaluation method '{method}'")


"""
" function ValueLocallyAdaptive
" F(B) = sum over realizations R of p(R) f(T_R(B)), blocks run in order.
"""
def ValueLocallyAdaptive(inst: Instance, oracle: Oracle, policy: LocallyAdaptivePolicy, method: str = METHOD_AUTO,
                         samples: int = None, stream: Stream = None, limit: int = None,
                         conditioning: str = CONDITIONING_BLOCK) -> Estimate:
    executor = PolicyExecutor(inst, oracle, policy, conditioning)
    reach = oracle.Indices(sorted(inst.NeighborsOf(policy.First())))

    if method == METHOD_AUTO:
        limit_ = GetConfig().enum_limit if limit is None else limit
        method = METHOD_EXACT if not executor.UsesCoins() and len(reach) <= limit_ else METHOD_MONTE_CARLO

    if method == METHOD_EXACT:
        if executor.UsesCoins():
            raise InputError("exact evaluation of policies with crs blocks is not supported; use monte-carlo",
                             ADSEED_ERR_INPUT_POLICY)
        if len(reach) == 0:
            return ExactEstimate(0.0)
        total = 0.0
        for bits, probs in IterRealizationChunks(inst.p[reach], limit):
            realized = np.zeros((bits.shape[0], oracle.Size()), dtype=bool)
            realized[:, reach] = bits
            total += float(probs @ oracle.ValueBatch(executor.ExecuteBatch(realized)))
        return ExactEstimate(total)

    if method == METHOD_MONTE_CARLO:
        return ValueAdaptiveExecutor(inst, oracle, executor, samples, stream)

    raise InputError(f"unknown evaluation method '{method}'")


"""
" function ValueAdaptiveExecutor
" Monte Carlo estimate of E[f(executor(R))]; every sampled realization must
" respect the budget.
"""
def ValueAdaptiveExecutor(inst: Instance, oracle: Oracle, executor: AdaptiveExecutor, samples: int = None,
                          stream: Stream = None, budget: float = None) -> Estimate:
    budget = inst.budget if budget is None else budget
    firstCost = len(executor.First())

    def sampleChunk(chunkStream: Stream, offset: int, size: int) -> np.ndarray:
        realized = SampleRealizationMatrix(inst.p, size, chunkStream.rng)
        seeded = executor.ExecuteBatch(realized, chunkStream.Derive(1))
        if (seeded & ~realized).any():
            r = int(np.flatnonzero((seeded & ~realized).any(axis=1))[0])
            raise InfeasibleError(f"sample {offset + r}: executor seeded nodes that did not realize "
                                  f"{sorted(inst.Ids(seeded[r] & ~realized[r]))}", ADSEED_ERR_INFEASIBLE_EXECUTION)
        spent = firstCost + seeded.sum(axis=1)
        over = np.flatnonzero(spent > budget + ADSEED_BUDGET_TOL)
        if len(over):
            r = int(over[0])
            present = sorted(inst.Ids(realized[r]))
            shown = present if len(present) <= 20 else present[:20] + ["..."]
            raise InfeasibleError(f"sample {offset + r}: seeds {int(spent[r])} exceed budget {budget:g} "
                                  f"in realization {shown}", ADSEED_ERR_INFEASIBLE_EXECUTION)
        return oracle.ValueBatch(seeded)

    return MonteCarlo(sampleChunk, _Samples(samples), _Stream(stream))


"""
" function ValueNonAdaptiveBatch
" F(T_c) for many candidate sets at once (rows of `masks`). Monte Carlo rows
" share one realization matrix, so differences between rows carry common
" random numbers. Returns (means, standard errors, exact).
"""
def ValueNonAdaptiveBatch(inst: Instance, oracle: Oracle, masks: np.ndarray, method: str = METHOD_AUTO,
                          samples: int = None, stream: Stream = None, limit: int = None):
    masks = np.asarray(masks, dtype=bool)
    count = masks.shape[0]
    if count == 0:
        return np.zeros(0), np.zeros(0), True

    if method == METHOD_AUTO:
        limit_ = GetConfig().enum_limit if limit is None else limit
        if oracle.HasClosedForm():
            method = METHOD_CLOSED_FORM
        elif masks.sum(axis=1).max() <= limit_:
            method = METHOD_EXACT
        else:
            method = METHOD_MONTE_CARLO

    if method == METHOD_CLOSED_FORM:
        if not oracle.HasClosedForm():
            raise InputError(f"closed-form evaluation is not available for {type(oracle).__name__}",
                             ADSEED_ERR_INPUT_FUNCTION)
        return oracle.MultilinearBatch(masks * inst.p), np.zeros(count), True

    if method == METHOD_EXACT:
        means = np.array([ValueNonAdaptive(inst, oracle, ids, METHOD_EXACT, limit=limit).mean
                          for ids in (inst.Ids(mask) for mask in masks)])
        return means, np.zeros(count), True

    if method == METHOD_MONTE_CARLO:
        samples = _Samples(samples)
        realized = SampleRealizationMatrix(inst.p, samples, _Stream(stream).rng)
        means = np.zeros(count)
        errors = np.zeros(count)
        step = max(1, (1 << 16) // samples)
        for start in range(0, count, step):
            block = masks[start:start + step]
            rows = (realized[None, :, :] & block[:, None, :]).reshape(-1, masks.shape[1])
            values = oracle.ValueBatch(rows).reshape(block.shape[0], samples)
            means[start:start + step] = values.mean(axis=1)
            if samples > 1:
                errors[start:start + step] = values.std(axis=1, ddof=1) / np.sqrt(samples)
        return means, errors, False

    raise InputError(f"unknown evaluation method '{method}'")


"""
" function ValuePolicy. dispatches on the policy kind; an eps-local policy is
" worth the non-adaptive value of its combined second stage.
"""
def ValuePolicy(inst: Instance, oracle: Oracle, policy: Policy, method: str = METHOD_AUTO, samples: int = None,
                stream: Stream = None, limit: int = None,
                conditioning: str = CONDITIONING_BLOCK) -> Estimate:
    if isinstance(policy, NonAdaptivePolicy):
        return ValueNonAdaptive(inst, oracle, policy.second, method, samples, stream, limit)
    if isinstance(policy, EpsilonLocalPolicy):
        return ValueNonAdaptive(inst, oracle, policy.Second(), method, samples, stream, limit)
    if isinstance(policy, LocallyAdaptivePolicy):
        if method == METHOD_CLOSED_FORM:
            raise InputError("closed-form evaluation applies to non-adaptive policies only", ADSEED_ERR_INPUT_POLICY)
        return ValueLocallyAdaptive(inst, oracle, policy, method, samples, stream, limit, conditioning)
    raise InputError(f"not a policy: {type(policy).__name__}", ADSEED_ERR_INPUT_POLICY)
