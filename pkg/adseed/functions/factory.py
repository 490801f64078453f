import logging

from ..core.error import InputError
from ..core.instance import Instance
from ..core.internal import *
from .coverage import CoverageOracle
from .function_api import *
from .mrs import MrsOracle
from .oracle import Oracle
from .special import AnyNonEmptyOracle, EdgeWitnessOracle, ProductGapOracle

logger = logging.getLogger("adseed.functions")


def ProductGapGroups(inst: Instance):
    # the first neighbor of each first-stage node is its special node
    return [(inst.neighbors[x][0], inst.neighbors[x][1:]) for x in inst.x_nodes if inst.neighbors.get(x)]


"""
" function CreateOracle. builds the value oracle named by the instance's
" function descriptor, over the instance's ground set N(X).
"""
def CreateOracle(inst: Instance) -> Oracle:
    descriptor = inst.function
    if not descriptor:
        raise InputError("instance has no function descriptor", ADSEED_ERR_INPUT_FUNCTION)

    kind = descriptor.get("type")
    ground = inst.Ground()
    try:
        if kind == FUNCTION_TYPE_COVERAGE:
            oracle = CoverageOracle(ground, descriptor["universe"], descriptor["covers"])
        elif kind == FUNCTION_TYPE_MRS:
            oracle = MrsOracle(ground, descriptor["terms"])
        elif kind == FUNCTION_TYPE_ANY_NONEMPTY:
            oracle = AnyNonEmptyOracle(ground)
        elif kind == FUNCTION_TYPE_EDGE_WITNESS:
            oracle = EdgeWitnessOracle(ground, descriptor["edges"])
        elif kind == FUNCTION_TYPE_PRODUCT_GAP:
            oracle = ProductGapOracle(ground, ProductGapGroups(inst), int(descriptor["m"]))
        else:
            raise InputError(f"unknown function type '{kind}', expected one of {list(FUNCTION_TYPES)}",
                             ADSEED_ERR_INPUT_FUNCTION)
    except (KeyError, TypeError, ValueError) as e:
        raise InputError(f"malformed '{kind}' function descriptor: {e!r}", ADSEED_ERR_INPUT_FUNCTION)

    logger.debug("[CreateOracle] %s over %d neighbors", type(oracle).__name__, oracle.Size())
    return oracle
