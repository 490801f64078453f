import os
import json
import tempfile

from typing import Any, Dict

from .error import InputError
from .instance import Instance, CreateInstance
from .internal import *
from .policy import *


def _Dumps(obj: Any) -> str:
    # floats go through repr, which keeps 17 significant digits
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def _Loads(text: str, what: str) -> Dict[str, Any]:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as e:
        raise InputError(f"malformed {what} json: {e}", ADSEED_ERR_INPUT_FORMAT)
    if not isinstance(obj, dict):
        raise InputError(f"{what} json must be an object", ADSEED_ERR_INPUT_FORMAT)
    return obj


def _Require(obj: Dict[str, Any], key: str, what: str):
    if key not in obj:
        raise InputError(f"{what} json is missing '{key}'", ADSEED_ERR_INPUT_FORMAT)
    return obj[key]


"""
" instance
"""
def InstanceToDict(inst: Instance) -> Dict[str, Any]:
    obj = {
        "x_nodes": list(inst.x_nodes),
        "neighbors": {x: list(ys) for x, ys in inst.neighbors.items()},
        "probabilities": dict(inst.probabilities),
        "budget": inst.budget,
    }
    if inst.function is not None:
        obj["function"] = inst.function
    return obj


def RenderInstance(inst: Instance) -> str:
    return _Dumps(InstanceToDict(inst))


def ParseInstance(text: str) -> Instance:
    obj = _Loads(text, "instance")
    try:
        return CreateInstance(
            _Require(obj, "x_nodes", "instance"),
            _Require(obj, "neighbors", "instance"),
            _Require(obj, "probabilities", "instance"),
            _Require(obj, "budget", "instance"),
            obj.get("function"),
        )
    except (TypeError, ValueError, AttributeError) as e:
        raise InputError(f"malformed instance json: {e}", ADSEED_ERR_INPUT_FORMAT)


"""
" policy
"""
def _Ids(ids) -> list:
    return sorted(ids)


def PolicyToDict(policy: Policy) -> Dict[str, Any]:
    kind = PolicyKind(policy)

    if kind == POLICY_KIND_NONADAPTIVE:
        return {
            "kind": kind,
            "first": _Ids(policy.first),
            "second": _Ids(policy.second),
            "weights": {y: policy.weights[y] for y in _Ids(policy.second)},
        }

    if kind == POLICY_KIND_EPSLOCAL:
        return {
            "kind": kind,
            "epsilon": policy.epsilon,
            "blocks": [{
                "first": _Ids(block.first),
                "budget": block.budget,
                "second": _Ids(block.second),
                "weights": {y: block.weights[y] for y in _Ids(block.second)},
            } for block in policy.blocks],
        }

    blocks = []
    for block in policy.blocks:
        entry = {
            "first": _Ids(block.first),
            "second_budget": block.second_budget,
            "mode": block.mode,
        }
        if block.mode == BLOCK_MODE_CRS:
            entry["keep_prob"] = block.keep_prob
            entry["cap"] = block.cap
            entry["second"] = _Ids(block.second or ())
        blocks.append(entry)
    return {"kind": kind, "epsilon": policy.epsilon, "blocks": blocks}


def PolicyFromDict(obj: Dict[str, Any]) -> Policy:
    kind = _Require(obj, "kind", "policy")
    try:
        if kind == POLICY_KIND_NONADAPTIVE:
            second = frozenset(str(y) for y in _Require(obj, "second", "policy"))
            weights = {str(y): float(v) for y, v in obj.get("weights", {}).items()}
            missing = sorted(second - set(weights))
            if missing:
                raise InputError(f"policy json has no weights for {missing}", ADSEED_ERR_INPUT_FORMAT)
            return NonAdaptivePolicy(frozenset(str(x) for x in _Require(obj, "first", "policy")), second, weights)

        if kind == POLICY_KIND_EPSLOCAL:
            blocks = []
            for entry in _Require(obj, "blocks", "policy"):
                blocks.append(BudgetedBlock(
                    first=frozenset(str(x) for x in entry["first"]),
                    budget=float(entry["budget"]),
                    second=frozenset(str(y) for y in entry["second"]),
                    weights={str(y): float(v) for y, v in entry["weights"].items()},
                ))
            return EpsilonLocalPolicy(tuple(blocks), float(_Require(obj, "epsilon", "policy")))

        if kind == POLICY_KIND_LOCALLYADAPTIVE:
            blocks = []
            for entry in _Require(obj, "blocks", "policy"):
                mode = entry.get("mode", BLOCK_MODE_AUTO)
                crs = mode == BLOCK_MODE_CRS
                blocks.append(AdaptiveBlockSpec(
                    first=frozenset(str(x) for x in entry["first"]),
                    second_budget=int(entry["second_budget"]),
                    mode=mode,
                    keep_prob=float(entry["keep_prob"]) if crs else None,
                    cap=float(entry["cap"]) if crs else None,
                    second=frozenset(str(y) for y in entry["second"]) if crs else None,
                ))
            epsilon = obj.get("epsilon")
            return LocallyAdaptivePolicy(tuple(blocks), None if epsilon is None else float(epsilon))

    except (KeyError, TypeError, ValueError, AttributeError) as e:
        raise InputError(f"malformed policy json: {e!r}", ADSEED_ERR_INPUT_FORMAT)

    raise InputError(f"unknown policy kind '{kind}'", ADSEED_ERR_INPUT_FORMAT)


def RenderPolicy(policy: Policy) -> str:
    return _Dumps(PolicyToDict(policy))


def ParsePolicy(text: str) -> Policy:
    return PolicyFromDict(_Loads(text, "policy"))


def RenderJson(obj: Any) -> str:
    return _Dumps(obj)


"""
" files
"""
def WriteAtomic(path: str, text: str):
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(prefix=".adseed_", dir=directory)
    try:
        with os.fdopen(fd, "w") as f:
            f.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.remove(tmp)
        raise


def ReadText(path: str) -> str:
    try:
        with open(path) as f:
            return f.read()
    except OSError as e:
        raise InputError(f"cannot read '{path}': {e.strerror}", ADSEED_ERR_INPUT_FORMAT)
