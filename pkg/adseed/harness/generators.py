import math
import itertools
import logging

from typing import Dict, List

import numpy as np

from ..core.config import GetConfig
from ..core.error import CapExceededError, InputError
from ..core.instance import Instance, CreateInstance
from ..core.internal import *
from ..functions.factory import CreateOracle
from ..functions.function_api import *
from ..sosp.problem import SospProblem, CreateSospProblem
from ..utils.stream import Stream, CreateStream
from .harness_api import *

logger = logging.getLogger("adseed.harness")


"""
" function GenGapNa
" One first-stage node with ceil(1/delta^2) neighbors of probability delta,
" budget 2, f(T) = 1 if T is not empty.
"""
def GenGapNa(delta: float) -> Instance:
    if not 0.0 < delta <= 1.0:
        raise InputError(f"delta must lie in (0,1] (got {delta})")
    n = math.ceil(1.0 / (delta * delta) - ADSEED_BUDGET_TOL)
    ys = [f"y{j}" for j in range(n)]
    return CreateInstance(["x0"], {"x0": ys}, {y: delta for y in ys}, 2.0, {"type": FUNCTION_TYPE_ANY_NONEMPTY})


"""
" function GenGapLa
" m first-stage nodes; each has one special neighbor (p = 1/m, listed
" first) and m^2 regular neighbors (p = 1). Budget m^2 + m + 1.
"""
def GenGapLa(m: int) -> Instance:
    m = int(m)
    if m < 2:
        raise InputError(f"m must be >= 2 (got {m})")
    limit = GetConfig().gap_la_max_m
    if m > limit:
        raise CapExceededError(f"m={m} needs {m ** 3} regular neighbors; the limit is m <= {limit}",
                               ADSEED_ERR_CAP_INSTANCE_SIZE)

    xs = [f"x{i}" for i in range(m)]
    neighbors, probabilities = {}, {}
    for i, x in enumerate(xs):
        special = f"s{i}"
        regular = [f"r{i}_{j}" for j in range(m * m)]
        neighbors[x] = [special] + regular
        probabilities[special] = 1.0 / m
        probabilities.update((y, 1.0) for y in regular)
    return CreateInstance(xs, neighbors, probabilities, m * m + m + 1, {"type": FUNCTION_TYPE_PRODUCT_GAP, "m": m})


def HardnessEdges(l: int, mode: str, sparsity: float, stream: Stream) -> List[List[str]]:
    vertices = [f"v{i}" for i in range(l)]
    if mode == HARDNESS_MODE_CLIQUE:
        return [[u, v] for u, v in itertools.combinations(vertices, 2)]
    if mode == HARDNESS_MODE_SPARSE:
        if not 0.0 <= sparsity <= 1.0:
            raise InputError(f"sparsity must lie in [0,1] (got {sparsity})")
        # each pair independently; an l-subgraph then has expected edge density `sparsity`
        pairs = list(itertools.combinations(vertices, 2))
        keep = stream.rng.random(len(pairs)) < sparsity
        return [[u, v] for (u, v), kept in zip(pairs, keep) if kept]
    raise InputError(f"unknown hardness mode '{mode}', expected one of {list(HARDNESS_MODES)}")


"""
" function GenHardnessInstance
" l vertices, all neighbors of a single first-stage node, each with
" probability k/l, under the edge-witness function.
"""
def GenHardnessInstance(l: int, k: float, mode: str = HARDNESS_MODE_CLIQUE, stream: Stream = None,
                        sparsity: float = 0.0) -> Instance:
    if l < 2:
        raise InputError(f"l must be >= 2 (got {l})")
    if not 0.0 < k <= l:
        raise InputError(f"k must lie in (0, l] (got {k})")
    stream = CreateStream(0) if stream is None else stream
    vertices = [f"v{i}" for i in range(l)]
    edges = HardnessEdges(l, mode, sparsity, stream)
    return CreateInstance(["x0"], {"x0": vertices}, {v: k / l for v in vertices}, 1.0 + k,
                          {"type": FUNCTION_TYPE_EDGE_WITNESS, "edges": edges})


def SospFromInstance(inst: Instance) -> SospProblem:
    # all first-stage nodes are seeded; the rest of the budget goes to neighbors
    k = inst.budget - len(inst.x_nodes)
    items = list(inst.ground)
    return CreateSospProblem(CreateOracle(inst), items, [inst.probabilities[y] for y in items], k)


def GenHardness(l: int, k: float, mode: str = HARDNESS_MODE_CLIQUE, stream: Stream = None,
                sparsity: float = 0.0) -> SospProblem:
    return SospFromInstance(GenHardnessInstance(l, k, mode, stream, sparsity))


"""
" function GenRandom
" Random bipartite instance: nx first-stage nodes, each with deg distinct
" neighbors drawn from a shared pool, i.i.d. probabilities in
" [pLow, pHigh] and a random function of the requested family.
"""
def GenRandom(nx: int, deg: int, pLow: float, pHigh: float, family: str = FUNCTION_TYPE_COVERAGE,
              stream: Stream = None, budget: float = 3.0, pool: int = None) -> Instance:
    if nx < 1 or deg < 1:
        raise InputError(f"nx and deg must be >= 1 (got {nx}, {deg})")
    if not 0.0 < pLow <= pHigh <= 1.0:
        raise InputError(f"need 0 < p_low <= p_high <= 1 (got {pLow}, {pHigh})")
    stream = CreateStream(0) if stream is None else stream
    rng = stream.rng

    pool = max(deg, (nx * deg + 1) // 2) if pool is None else max(deg, pool)
    names = [f"y{j}" for j in range(pool)]
    xs = [f"x{i}" for i in range(nx)]
    neighbors = {x: [names[j] for j in sorted(rng.choice(pool, size=deg, replace=False))] for x in xs}
    used = sorted({y for ys in neighbors.values() for y in ys}, key=lambda y: int(y[1:]))
    probabilities = {y: float(v) for y, v in zip(used, rng.uniform(pLow, pHigh, size=len(used)))}
    # exact endpoints when the range is degenerate
    if pLow == pHigh:
        probabilities = {y: float(pLow) for y in used}

    function = RandomFunction(family, used, rng)
    return CreateInstance(xs, neighbors, probabilities, budget, function)


def RandomFunction(family: str, ground: List[str], rng: np.random.Generator) -> Dict:
    if family == FUNCTION_TYPE_COVERAGE:
        size = max(2, len(ground))
        universe = {f"u{i}": float(w) for i, w in enumerate(rng.uniform(0.5, 1.5, size=size))}
        names = list(universe)
        covers = {}
        for y in ground:
            count = int(rng.integers(1, 4))
            covers[y] = sorted(names[i] for i in rng.choice(size, size=min(count, size), replace=False))
        return {"type": FUNCTION_TYPE_COVERAGE, "universe": universe, "covers": covers}

    if family == FUNCTION_TYPE_MRS:
        terms = []
        for _ in range(int(rng.integers(1, 3))):
            order = [ground[i] for i in rng.permutation(len(ground))]
            cuts = sorted(rng.choice(np.arange(1, len(order)), size=min(len(order) - 1, max(0, len(order) // 3)),
                                     replace=False).tolist()) if len(order) > 1 else []
            parts = [order[a:b] for a, b in zip([0] + cuts, cuts + [len(order)])]
            terms.append({
                "weight": float(rng.uniform(0.5, 1.5)),
                "parts": [{"members": sorted(part), "capacity": int(rng.integers(1, 3))} for part in parts if part],
            })
        return {"type": FUNCTION_TYPE_MRS, "terms": terms}

    if family == FUNCTION_TYPE_ANY_NONEMPTY:
        return {"type": FUNCTION_TYPE_ANY_NONEMPTY}

    if family == FUNCTION_TYPE_EDGE_WITNESS:
        pairs = list(itertools.combinations(ground, 2))
        keep = rng.random(len(pairs)) < 0.3
        return {"type": FUNCTION_TYPE_EDGE_WITNESS, "edges": [[u, v] for (u, v), kept in zip(pairs, keep) if kept]}

    raise InputError(f"no random generator for function family '{family}'", ADSEED_ERR_INPUT_FUNCTION)
