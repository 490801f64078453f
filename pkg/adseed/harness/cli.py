import io
import csv
import math
import sys
import time
import argparse
import logging

from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Sequence

from ..core.codec import RenderInstance, ParseInstance, RenderPolicy, ParsePolicy, RenderJson, WriteAtomic, ReadText
from ..core.config import ConfigFactoryInitialize, GetConfig
from ..core.error import AdseedError, CapExceededError, InfeasibleError, InputError
from ..core.instance import Instance, ValidateInstance
from ..core.internal import *
from ..core.policy import *
from ..evaluation.evaluator import METHOD_AUTO, METHOD_CLOSED_FORM, METHOD_EXACT, METHOD_MONTE_CARLO, ValuePolicy
from ..evaluation.executor import CONDITIONING_BLOCK, CONDITIONINGS
from ..functions.factory import CreateOracle
from ..functions.function_api import FUNCTION_TYPES, FUNCTION_TYPE_COVERAGE
from ..functions.oracle import Oracle
from ..locallyadaptive.convert import NaToLocallyAdaptive
from ..locallyadaptive.greedy import SolveLocallyAdaptive
from ..nonadaptive.block_finder import EnumBlockFinder
from ..nonadaptive.crs import NaToAdaptive
from ..nonadaptive.greedy import NonAdaptiveGreedy, ParentChildGreedy
from ..nonadaptive.nonadaptive_api import GREEDY_RESERVE
from ..nonadaptive.repair import SmallKFallback
from ..nonadaptive.trace import GreedyTrace
from ..oracle.bruteforce import OptAdaptiveBruteforce, CheckBruteforceLimits
from ..sosp.mrs_block import MrsBlockFinder
from ..sosp.solver import SospSolve, SospBruteforce
from ..sosp.sosp_api import RESIDUAL_FIT, RESIDUAL_MODES
from ..utils.stream import Stream, CreateStream
from .generators import GenGapNa, GenGapLa, GenHardnessInstance, GenRandom, SospFromInstance
from .harness_api import *
from .reference import GapNaReference, GapLaReference

logger = logging.getLogger("adseed.harness")

FINDER_ENUM = "enum"
FINDER_MRS = "mrs"
METHODS = (METHOD_AUTO, METHOD_CLOSED_FORM, METHOD_EXACT, METHOD_MONTE_CARLO)


"""
" class RunResult. a policy with its greedy trace, or an SOSP result.
"""
@dataclass
class RunResult:
    algorithm: str
    policy: Optional[Policy] = None
    trace: Optional[GreedyTrace] = None
    sosp: Optional[Dict[str, Any]] = None


def _LoadInstance(path: str) -> Instance:
    inst = ParseInstance(ReadText(path))
    violations = ValidateInstance(inst)
    if violations:
        raise InputError(f"invalid instance '{path}': " + "; ".join(violations[:5]), ADSEED_ERR_INPUT_INSTANCE)
    return inst


def _Finder(inst: Instance, oracle: Oracle, kind: str, epsilon: float, samples: int, stream: Stream):
    if kind == FINDER_MRS:
        return MrsBlockFinder(inst, oracle, epsilon, samples, stream)
    return EnumBlockFinder(inst, oracle, epsilon, samples, stream)


def _SospResult(problem, chosen, value, concave=None) -> Dict[str, Any]:
    result = {"chosen": sorted(chosen), "value": value, "k": problem.k}
    if concave is not None:
        result["q"] = {y: float(v) for y, v in concave.q.q.items()}
        result["relaxed_value"] = concave.objective
        result["certificate_gap"] = concave.certificate_gap
        result["iterations"] = concave.iterations
    return result


"""
" function RunAlgorithm
" One solver on one instance. na-to-la, na-greedy+crs and la-greedy switch
" to the brute-force small-k policy when the budget is too small.
"""
def RunAlgorithm(inst: Instance, oracle: Oracle, algorithm: str, epsilon: float, samples: int, stream: Stream,
                 finder: str = FINDER_ENUM, residual: str = RESIDUAL_FIT) -> RunResult:
    k = inst.budget
    if algorithm == ALGORITHM_NA_GREEDY:
        policy, trace = NonAdaptiveGreedy(inst, oracle, k, epsilon, _Finder(inst, oracle, finder, epsilon, samples,
                                                                                stream.Derive(0)))
        return RunResult(algorithm, policy, trace)

    if algorithm == ALGORITHM_NA_GREEDY_CRS:
        policy, trace = NaToAdaptive(inst, oracle, k, epsilon, _Finder(inst, oracle, finder, epsilon, samples,
                                                                           stream.Derive(0)), samples, stream.Derive(1))
        return RunResult(algorithm, policy, trace)

    if algorithm == ALGORITHM_PC_GREEDY:
        policy, trace = ParentChildGreedy(inst, oracle, k, samples, stream)
        return RunResult(algorithm, policy, trace)

    if algorithm == ALGORITHM_LA_GREEDY:
        policy, trace = SolveLocallyAdaptive(inst, oracle, k, epsilon, samples, stream)
        return RunResult(algorithm, policy, trace)

    if algorithm == ALGORITHM_NA_TO_LA:
        blockFinder = _Finder(inst, oracle, finder, epsilon, samples, stream.Derive(0))
        if k <= max(GetConfig().small_k_threshold, GREEDY_RESERVE / blockFinder.Epsilon()):
            logger.info("[RunAlgorithm] k=%g is small, use the brute-force fallback", k)
            return RunResult(algorithm, SmallKFallback(inst, oracle, k))
        policy, trace = NaToLocallyAdaptive(inst, oracle, k, epsilon, None, blockFinder, samples, stream.Derive(1))
        return RunResult(algorithm, policy, trace)

    if algorithm == ALGORITHM_BRUTEFORCE:
        return RunResult(algorithm, SmallKFallback(inst, oracle, k))

    if algorithm in (ALGORITHM_SOSP_FW, ALGORITHM_SOSP_BF):
        problem = SospFromInstance(inst)
        if algorithm == ALGORITHM_SOSP_FW:
            solution = SospSolve(problem, residual=residual)
            result = _SospResult(problem, solution.chosen, solution.value, solution.concave)
            result["residual"] = residual
            return RunResult(algorithm, sosp=result)
        chosen, value = SospBruteforce(problem)
        return RunResult(algorithm, sosp=_SospResult(problem, chosen, value))

    raise InputError(f"unknown algorithm '{algorithm}', expected one of {list(ALGORITHMS)}")


def _Emit(text: str, out: Optional[str]):
    if out:
        WriteAtomic(out, text)
    else:
        sys.stdout.write(text)


def RenderRows(rows: List[Dict[str, Any]], fmt: str, columns: Sequence[str] = None) -> str:
    if fmt == FORMAT_JSON:
        return RenderJson(rows if len(rows) != 1 or columns is not None else rows[0])
    columns = list(columns or (rows[0].keys() if rows else []))
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow(["" if row.get(c) is None else (repr(row[c]) if isinstance(row[c], float) else row[c])
                         for c in columns])
    return out.getvalue()


"""
" subcommands
"""
def CmdGen(args) -> int:
    stream = CreateStream(args.seed)
    if args.kind == GEN_KIND_GAP_NA:
        inst = GenGapNa(args.param if args.param is not None else 0.5)
    elif args.kind == GEN_KIND_GAP_LA:
        inst = GenGapLa(int(args.param if args.param is not None else 3))
    elif args.kind == GEN_KIND_HARDNESS:
        inst = GenHardnessInstance(args.l, args.k, args.mode, stream, args.sparsity)
    else:
        inst = GenRandom(args.nx, args.deg, args.p_low, args.p_high, args.family, stream, args.budget)
    _Emit(RenderInstance(inst), args.out)
    logger.info("[gen] %s: %d first-stage nodes, %d neighbors", args.kind, len(inst.x_nodes), len(inst.ground))
    return ADSEED_OK


def CmdSolve(args) -> int:
    inst = _LoadInstance(args.instance)
    oracle = CreateOracle(inst)
    result = RunAlgorithm(inst, oracle, args.alg, args.epsilon, args.samples, CreateStream(args.seed), args.finder,
                          args.residual)

    if result.sosp is not None:
        _Emit(RenderJson(result.sosp), args.out)
        return ADSEED_OK

    if args.out:
        WriteAtomic(args.out, RenderPolicy(result.policy))
        if result.trace is not None:
            WriteAtomic(args.trace or args.out + ".trace.csv", result.trace.RenderCsv())

    estimate = ValuePolicy(inst, oracle, result.policy, METHOD_AUTO, args.samples, CreateStream(args.seed).Derive(1))
    summary = {"algorithm": args.alg, "kind": PolicyKind(result.policy), "cost": Cost(result.policy)}
    summary.update(estimate.ToDict())
    sys.stdout.write(RenderRows([summary], args.format))
    return ADSEED_OK


def CmdEval(args) -> int:
    inst = _LoadInstance(args.instance)
    policy = ParsePolicy(ReadText(args.policy))
    violations = CheckPolicy(inst, policy)
    if violations:
        raise InfeasibleError(f"policy '{args.policy}' is infeasible: " + "; ".join(violations[:5]),
                              ADSEED_ERR_INFEASIBLE_POLICY)
    estimate = ValuePolicy(inst, CreateOracle(inst), policy, args.method, args.samples, CreateStream(args.seed),
                           conditioning=args.conditioning)
    row = {"kind": PolicyKind(policy), "cost": Cost(policy)}
    row.update(estimate.ToDict())
    _Emit(RenderRows([row], args.format), args.out)
    return ADSEED_OK


def CmdOracle(args) -> int:
    inst = _LoadInstance(args.instance)
    report = OptAdaptiveBruteforce(inst, CreateOracle(inst), args.k, witness=args.witness)
    _Emit(RenderJson(report.ToDict()), args.out)
    return ADSEED_OK


def CmdCompare(args) -> int:
    algorithms = [a.strip() for a in args.algs.split(",") if a.strip()]
    unknown = [a for a in algorithms if a not in ALGORITHMS]
    if unknown:
        raise InputError(f"unknown algorithms {unknown}, expected some of {list(ALGORITHMS)}")

    rows = []
    for i, path in enumerate(args.instances):
        inst = _LoadInstance(path)
        oracle = CreateOracle(inst)
        optimum = None
        try:
            CheckBruteforceLimits(inst)
            optimum = OptAdaptiveBruteforce(inst, oracle, nonadaptive=False).opt_adaptive
        except (CapExceededError, InputError) as e:
            logger.info("[compare] no oracle column for '%s': %s", path, e.msg)

        for j, algorithm in enumerate(algorithms):
            stream = CreateStream(args.seed).Derive(i, j)
            start = time.perf_counter()
            value, error = None, None
            try:
                value, error = _Score(inst, oracle, algorithm, args, stream)
            except AdseedError as e:
                logger.warning("[compare] %s refused '%s': %s", algorithm, path, e.msg)
            elapsed = (time.perf_counter() - start) * 1000.0 if args.timing else 0.0
            rows.append({
                "instance-id": path,
                "algorithm": algorithm,
                "epsilon": args.epsilon,
                "samples": args.samples,
                "value": value,
                "std_error": error,
                "oracle_value": optimum,
                "ratio": value / optimum if optimum and value is not None else None,
                "wall-time-ms": round(elapsed, 3),
            })
            logger.debug("[compare] %s %s value %s", path, algorithm, value)

    _Emit(RenderRows(rows, args.format, COMPARE_COLUMNS), args.out)
    return ADSEED_OK


def _Score(inst: Instance, oracle: Oracle, algorithm: str, args, stream: Stream):
    result = RunAlgorithm(inst, oracle, algorithm, args.epsilon, args.samples, stream, args.finder)
    if result.sosp is not None:
        return result.sosp["value"], 0.0
    estimate = ValuePolicy(inst, oracle, result.policy, METHOD_AUTO, args.samples, stream.Derive(2))
    return estimate.mean, estimate.std_error


def _GapReferencePolicies(inst: Instance, delta: float) -> Dict[str, Policy]:
    # x0 then any realized neighbor, against x0 with floor(1/delta) neighbors up front
    chosen = sorted(inst.ground, key=lambda y: int(y[1:]))[:int(math.floor(1.0 / delta + ADSEED_BUDGET_TOL))]
    return {
        "adaptive": LocallyAdaptivePolicy((AdaptiveBlockSpec(frozenset({"x0"}), 1, BLOCK_MODE_GREEDY),)),
        "nonadaptive": CreateNonAdaptivePolicy(inst, ["x0"], chosen),
    }


def CmdGap(args) -> int:
    if args.family == GAP_FAMILY_NA:
        reference = GapNaReference(args.param)
    else:
        reference = GapLaReference(int(args.param))
    result = reference.ToDict()

    if args.run:
        inst = GenGapNa(args.param) if args.family == GAP_FAMILY_NA else GenGapLa(int(args.param))
        oracle = CreateOracle(inst)
        stream = CreateStream(args.seed)
        try:
            CheckBruteforceLimits(inst)
            result["oracle"] = OptAdaptiveBruteforce(inst, oracle).ToDict()
        except CapExceededError as e:
            logger.warning("[gap] instance too large for the brute-force solvers: %s", e.msg)
            result["oracle"] = {"skipped": e.msg}

        solvers = {}
        for j, algorithm in enumerate(GAP_RUN_ALGORITHMS[args.family]):
            try:
                run = RunAlgorithm(inst, oracle, algorithm, args.epsilon, args.samples, stream.Derive(0, j))
                estimate = ValuePolicy(inst, oracle, run.policy, METHOD_AUTO, args.samples, stream.Derive(1, j))
                solvers[algorithm] = {"kind": PolicyKind(run.policy), "cost": Cost(run.policy)}
                solvers[algorithm].update(estimate.ToDict())
            except (CapExceededError, InputError) as e:
                logger.warning("[gap] %s skipped: %s", algorithm, e.msg)
                solvers[algorithm] = {"skipped": e.msg}
        result["solvers"] = solvers

        if args.family == GAP_FAMILY_NA:
            references = {}
            for j, (name, policy) in enumerate(_GapReferencePolicies(inst, args.param).items()):
                estimate = ValuePolicy(inst, oracle, policy, METHOD_AUTO, args.samples, stream.Derive(2, j))
                references[name] = estimate.ToDict()
            result["reference_policies"] = references

    _Emit(RenderJson(result), args.out)
    return ADSEED_OK


"""
" parser
"""
def _CommonParser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--epsilon", type=float, default=DEFAULT_EPSILON)
    common.add_argument("--samples", type=int, default=None)
    common.add_argument("--seed", type=int, default=DEFAULT_SEED)
    common.add_argument("--out", type=str, default=None)
    common.add_argument("--format", choices=FORMATS, default=FORMAT_JSON)
    common.add_argument("--cap-subsets", type=int, default=None)
    common.add_argument("--cap-enum", type=int, default=None)
    common.add_argument("-v", "--verbose", action="store_true")
    return common


def BuildParser() -> argparse.ArgumentParser:
    common = _CommonParser()
    parser = argparse.ArgumentParser(prog="adseed", description="Two-stage adaptive seeding toolkit.")
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("gen", parents=[common], help="write an instance file")
    gen.add_argument("--kind", choices=GEN_KINDS, required=True)
    gen.add_argument("--param", type=float, default=None, help="delta for gap-na, m for gap-la")
    gen.add_argument("--l", type=int, default=5)
    gen.add_argument("--k", type=float, default=1.7)
    gen.add_argument("--mode", choices=HARDNESS_MODES, default=HARDNESS_MODE_CLIQUE)
    gen.add_argument("--sparsity", type=float, default=0.0)
    gen.add_argument("--nx", type=int, default=5)
    gen.add_argument("--deg", type=int, default=2)
    gen.add_argument("--p-low", type=float, default=0.1)
    gen.add_argument("--p-high", type=float, default=0.9)
    gen.add_argument("--family", choices=FUNCTION_TYPES, default=FUNCTION_TYPE_COVERAGE)
    gen.add_argument("--budget", type=float, default=3.0)
    gen.set_defaults(handler=CmdGen)

    solve = sub.add_parser("solve", parents=[common], help="write a policy file and its greedy trace")
    solve.add_argument("instance")
    solve.add_argument("--alg", choices=ALGORITHMS, required=True)
    solve.add_argument("--finder", choices=(FINDER_ENUM, FINDER_MRS), default=FINDER_ENUM)
    solve.add_argument("--trace", type=str, default=None)
    solve.add_argument("--residual", choices=RESIDUAL_MODES, default=RESIDUAL_FIT,
                       help="sosp-fw: what happens to the item left fractional by rounding")
    solve.set_defaults(handler=CmdSolve)

    evaluate = sub.add_parser("eval", parents=[common], help="score a policy file against an instance")
    evaluate.add_argument("instance")
    evaluate.add_argument("policy")
    evaluate.add_argument("--method", choices=METHODS, default=METHOD_AUTO)
    evaluate.add_argument("--conditioning", choices=CONDITIONINGS, default=CONDITIONING_BLOCK,
                          help="block: a block sees its own realized neighbors; full: the whole realization")
    evaluate.set_defaults(handler=CmdEval)

    oracle = sub.add_parser("oracle", parents=[common], help="brute-force optima of a small instance")
    oracle.add_argument("instance")
    oracle.add_argument("--k", type=float, default=None)
    oracle.add_argument("--witness", action="store_true")
    oracle.set_defaults(handler=CmdOracle)

    # own copy of the common options: the csv default must not leak into the other commands
    compare = sub.add_parser("compare", parents=[_CommonParser()], help="ratio table of several algorithms")
    compare.add_argument("instances", nargs="+")
    compare.add_argument("--algs", type=str, default=",".join(COMPARE_ALGORITHMS))
    compare.add_argument("--finder", choices=(FINDER_ENUM, FINDER_MRS), default=FINDER_ENUM)
    compare.add_argument("--no-timing", dest="timing", action="store_false")
    compare.set_defaults(handler=CmdCompare, format=FORMAT_CSV)

    gap = sub.add_parser("gap", parents=[common], help="adaptivity-gap reference values")
    gap.add_argument("--family", choices=GAP_FAMILIES, required=True)
    gap.add_argument("--param", type=float, required=True)
    gap.add_argument("--run", action="store_true")
    gap.set_defaults(handler=CmdGap)
    return parser


def main(argv: Sequence[str] = None) -> int:
    args = BuildParser().parse_args(argv)
    logging.basicConfig(format="[%(name)s] %(message)s", level=logging.DEBUG if args.verbose else logging.WARNING)

    try:
        ConfigFactoryInitialize(subset_cap=args.cap_subsets, enum_limit=args.cap_enum, mc_samples=args.samples)
        return args.handler(args)
    except AdseedError as e:
        logger.error("[%s] %s", args.command, e)
        return e.ExitCode()


if __name__ == "__main__":
    sys.exit(main())
