from typing import Dict, Iterable, Mapping, Sequence

from adseed.core.config import ConfigFactory
from adseed.core.instance import Instance, CreateInstance
from adseed.functions.function_api import FUNCTION_TYPE_COVERAGE


def CoverageInstance(neighbors: Mapping[str, Sequence[str]], probabilities: Mapping[str, float], budget: float,
                     covers: Mapping[str, Iterable[str]], universe: Dict[str, float] = None) -> Instance:
    """
    Coverage instance; every universe element weighs 1 unless given.
    """
    covers = {y: sorted(us) for y, us in covers.items()}
    if universe is None:
        universe = {u: 1.0 for us in covers.values() for u in us}
    function = {"type": FUNCTION_TYPE_COVERAGE, "universe": universe, "covers": covers}
    return CreateInstance(list(neighbors), neighbors, probabilities, budget, function)


def UnitCoverageInstance(neighbors: Mapping[str, Sequence[str]], probabilities: Mapping[str, float],
                         budget: float) -> Instance:
    # each neighbor covers its own element, so f(T) = |T|
    ys = {y for group in neighbors.values() for y in group}
    return CoverageInstance(neighbors, probabilities, budget, {y: [f"u_{y}"] for y in ys})


def StarInstance() -> Instance:
    """
    Two stars sharing a neighbor:
      a -> y1 y2 y3, b -> y3 y4
    """
    neighbors = {"a": ["y1", "y2", "y3"], "b": ["y3", "y4"]}
    probabilities = {"y1": 0.5, "y2": 0.5, "y3": 0.25, "y4": 1.0}
    covers = {"y1": ["u1"], "y2": ["u1", "u2"], "y3": ["u3"], "y4": ["u2", "u4"]}
    return CoverageInstance(neighbors, probabilities, 3.0, covers)


def ResetConfig():
    ConfigFactory().Reset()


def StarsInstance(stars: int, children: int, p: float, budget: float) -> Instance:
    """
    Disjoint stars x{i} -> y{i}_{j} under unit coverage.
    """
    neighbors = {f"x{i}": [f"y{i}_{j}" for j in range(children)] for i in range(stars)}
    probabilities = {y: p for ys in neighbors.values() for y in ys}
    return UnitCoverageInstance(neighbors, probabilities, budget)
