from typing import FrozenSet, List, Optional

from ..core.instance import Instance, Realization
from ..core.policy import LocallyAdaptivePolicy
from ..evaluation.executor import CONDITIONING_BLOCK, PolicyExecutor
from ..functions.oracle import Oracle
from ..utils.stream import Stream


"""
" function ExecutePolicy
" Blocks run in order; each one sees the realized part of its own N(S_b)
" and what the blocks before it picked. CONDITIONING_FULL lets a block
" anticipate the later blocks' picks on the whole realization.
"""
def ExecutePolicy(inst: Instance, oracle: Oracle, policy: LocallyAdaptivePolicy, realization: Realization,
                  stream: Optional[Stream] = None, conditioning: str = CONDITIONING_BLOCK) -> FrozenSet[str]:
    return PolicyExecutor(inst, oracle, policy, conditioning).Execute(realization, stream)


def ExecutePolicyBlocks(inst: Instance, oracle: Oracle, policy: LocallyAdaptivePolicy, realization: Realization,
                        stream: Optional[Stream] = None,
                        conditioning: str = CONDITIONING_BLOCK) -> List[FrozenSet[str]]:
    realized = inst.Mask(y for y in realization.present if y in inst.index)
    picks = PolicyExecutor(inst, oracle, policy, conditioning).ExecuteBlocksBatch(realized[None, :], stream)
    return [inst.Ids(block[0]) for block in picks]
