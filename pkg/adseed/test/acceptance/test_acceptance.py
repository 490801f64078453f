import math
import unittest

import numpy as np

from adseed.core.policy import *
from adseed.evaluation.evaluator import METHOD_MONTE_CARLO, ValueAdaptiveExecutor, ValueLocallyAdaptive, ValueNonAdaptive
from adseed.functions.check import CheckOracle
from adseed.functions.factory import CreateOracle
from adseed.functions.function_api import *
from adseed.harness.generators import GenGapLa, GenGapNa, GenHardnessInstance, GenRandom
from adseed.harness.reference import CliqueExpectedValue, GapLaReference, GapNaReference, HardnessReference
from adseed.locallyadaptive.convert import LocalToLocallyAdaptive, NonAdaptiveToLocal
from adseed.locallyadaptive.greedy import SolveLocallyAdaptive
from adseed.nonadaptive.crs import CrsAdapt, CrsExecutor
from adseed.nonadaptive.repair import SmallKFallback
from adseed.oracle.bruteforce import OptAdaptiveBruteforce
from adseed.sosp.concave import RelaxedObjective, SolveConcave
from adseed.sosp.problem import CreateSospProblem
from adseed.sosp.solver import SospBruteforce, SospSolve
from adseed.sosp.sosp_api import RESIDUAL_DEFER, RESIDUAL_FIT, RESIDUAL_KEEP
from adseed.test.fixtures import ResetConfig, UnitCoverageInstance
from adseed.utils.stream import CreateStream


def RandomSospProblem(seed: int, k: float = 0.5):
    # twelve coverage items with probabilities in [0.05, 0.1]
    inst = GenRandom(1, 12, 0.05, 0.1, FUNCTION_TYPE_COVERAGE, CreateStream(seed))
    items = list(inst.ground)
    return CreateSospProblem(CreateOracle(inst), items, [inst.probabilities[y] for y in items], k)


class AdaptivityGapTest(unittest.TestCase):
    def test_nonadaptive_gap_instance(self):
        inst = GenGapNa(0.05)
        oracle = CreateOracle(inst)
        ys = list(inst.ground)
        nonadaptive = ValueNonAdaptive(inst, oracle, ys[:20]).mean
        self.assertAlmostEqual(nonadaptive, 1.0 - 0.95 ** 20, places=9)

        # x0 up front, then any one realized neighbor
        policy = LocallyAdaptivePolicy((AdaptiveBlockSpec(frozenset({"x0"}), 1, BLOCK_MODE_GREEDY),))
        adaptive = ValueLocallyAdaptive(inst, oracle, policy, METHOD_MONTE_CARLO, 2000, CreateStream(5)).mean
        self.assertGreater(adaptive, 0.999)
        self.assertLess(abs(nonadaptive / adaptive - (1.0 - math.exp(-1.0))), 0.02)
        self.assertLess(abs(GapNaReference(0.05).ratio - nonadaptive / adaptive), 1e-3)

    def test_locally_adaptive_separation(self):
        limit = GapLaReference(40).limit_ratio
        self.assertAlmostEqual(limit, 0.8537, delta=5e-4)
        self.assertAlmostEqual(GapLaReference(40).ratio, 0.8525, delta=1e-3)
        distances = [abs(GapLaReference(m).ratio - limit) for m in (10, 40, 200)]
        self.assertLess(distances[1], distances[0])
        self.assertLess(distances[2], distances[1])
        self.assertLess(distances[2], 5e-4)

    def test_nonadaptive_never_far_behind(self):
        # opt_na >= (1 - 1/e - 2/k) opt_a
        for seed in range(5):
            inst = GenRandom(4, 3, 0.2, 0.9, FUNCTION_TYPE_COVERAGE, CreateStream(seed), budget=4.0)
            report = OptAdaptiveBruteforce(inst, CreateOracle(inst))
            self.assertLessEqual(report.opt_nonadaptive, report.opt_adaptive + 1e-9)
            self.assertGreaterEqual(report.opt_nonadaptive, (1.0 - math.exp(-1.0) - 0.5) * report.opt_adaptive)


class PipelineSandwichTest(unittest.TestCase):
    def test_la_greedy_against_the_adaptive_optimum(self):
        factor = (1.0 - math.exp(-1.0)) ** 2 - 0.1
        rng = np.random.default_rng(17)
        fallbacks = 0
        for seed in range(20):
            nx, deg = int(rng.integers(2, 6)), int(rng.integers(2, 4))
            budget = float(rng.choice([2.0, 3.0, 4.0]))
            inst = GenRandom(nx, deg, 0.2, 0.9, FUNCTION_TYPE_COVERAGE, CreateStream(seed), budget=budget)
            self.assertLessEqual(len(inst.x_nodes), 5)
            self.assertLessEqual(len(inst.ground), 10)
            oracle = CreateOracle(inst)

            optimum = OptAdaptiveBruteforce(inst, oracle, nonadaptive=False).opt_adaptive
            policy, trace = SolveLocallyAdaptive(inst, oracle, epsilon=0.5)
            self.assertEqual(CheckPolicy(inst, policy), [])
            estimate = ValueLocallyAdaptive(inst, oracle, policy)
            self.assertGreaterEqual(estimate.Upper(3.0) + 1e-9, factor * optimum)
            self.assertLessEqual(estimate.Lower(3.0), optimum + 1e-9)
            if trace is None:
                fallbacks += 1
                self.assertAlmostEqual(estimate.mean, optimum, places=9)
        self.assertEqual(fallbacks, 20)


class SmallBudgetTest(unittest.TestCase):
    def test_fallback_is_optimal(self):
        for seed in range(4):
            for budget in (2.0, 3.0, 4.0):
                inst = GenRandom(3, 2, 0.3, 0.8, FUNCTION_TYPE_COVERAGE, CreateStream(seed), budget=budget)
                oracle = CreateOracle(inst)
                policy = SmallKFallback(inst, oracle)
                optimum = OptAdaptiveBruteforce(inst, oracle, nonadaptive=False).opt_adaptive
                self.assertAlmostEqual(ValueLocallyAdaptive(inst, oracle, policy).mean, optimum, places=9)


class SospTest(unittest.TestCase):
    def test_rounded_relaxation_near_optimal(self):
        # delta = 0.1, k = 0.5: the rounded set with its residual is within 1 - 0.05 - 0.02 of the optimum
        for seed in range(10):
            problem = RandomSospProblem(seed)
            _, best = SospBruteforce(problem)

            kept = SospSolve(problem, iters=2000, tol=1e-5, residual=RESIDUAL_KEEP)
            self.assertLessEqual(kept.Cost(problem), problem.k + problem.Delta() + 1e-9)
            self.assertGreaterEqual(kept.value, (1.0 - 0.05 - 0.02) * best)

            fit = SospSolve(problem, iters=2000, tol=1e-5, residual=RESIDUAL_FIT)
            deferred = SospSolve(problem, iters=2000, tol=1e-5, residual=RESIDUAL_DEFER)
            self.assertLessEqual(fit.Cost(problem), problem.k + 1e-9)
            self.assertLessEqual(fit.value, best + 1e-9)
            self.assertGreaterEqual(fit.value + 1e-9, deferred.value)


class ConcaveNumericsTest(unittest.TestCase):
    def setUp(self):
        self.problem = RandomSospProblem(0)
        self.objective = RelaxedObjective(self.problem)
        self.rng = np.random.default_rng(23)

    def _Point(self):
        # feasible: inside the box and sum(q) <= k
        q = self.rng.uniform(0.0, 1.0, self.problem.Size()) * self.problem.p
        return q * min(1.0, self.problem.k / q.sum())

    def test_gradient_matches_differences(self):
        h = 1e-5
        for _ in range(100):
            q = self._Point()
            grad = self.objective.Gradient(q)
            for i in range(len(q)):
                e = np.zeros(len(q))
                e[i] = h
                numeric = (self.objective.Value(q + e) - self.objective.Value(q - e)) / (2 * h)
                self.assertLessEqual(abs(grad[i] - numeric), 1e-6 * abs(numeric))

    def test_frank_wolfe_terminates_on_the_gap(self):
        solution = SolveConcave(self.problem, tol=1e-4)
        self.assertLessEqual(solution.certificate_gap, 1e-4)
        for a, b in zip(solution.history, solution.history[1:]):
            self.assertLessEqual(a, b)
        self.assertTrue(self.problem.Feasible(solution.Vector(self.problem)))

    def test_chords(self):
        for _ in range(1000):
            a, b = self._Point(), self._Point()
            t = self.rng.uniform()
            mid = self.objective.Value(t * a + (1.0 - t) * b)
            self.assertGreaterEqual(mid + 1e-9, t * self.objective.Value(a) + (1.0 - t) * self.objective.Value(b))


class ThinningTest(unittest.TestCase):
    def setUp(self):
        ys = [f"y{j}" for j in range(1300)]
        self.inst = UnitCoverageInstance({"x0": ys}, {y: 0.5 for y in ys}, 700.0)
        self.oracle = CreateOracle(self.inst)
        self.policy = CreateNonAdaptivePolicy(self.inst, ["x0"], ys)

    def test_thinning_keeps_most_value(self):
        total = ValueNonAdaptive(self.inst, self.oracle, self.policy.second).mean
        self.assertAlmostEqual(total, 650.0, places=6)
        self.assertEqual(CheckPolicy(self.inst, CrsAdapt(self.inst, self.policy, 0.25)), [])

        # every sample is checked against the budget, so a pass means no realization overspent
        estimate = ValueAdaptiveExecutor(self.inst, self.oracle, CrsExecutor(self.inst, self.oracle, self.policy, 0.25),
                                         100_000, CreateStream(11))
        self.assertEqual(estimate.samples, 100_000)
        self.assertGreaterEqual(estimate.mean, (1.0 - 2 * 0.25) * total - 3.0 * estimate.std_error)
        # about 487 kept nodes, never near the cap of 699
        self.assertAlmostEqual(estimate.mean, 0.75 * total, delta=5.0 * estimate.std_error + 1e-6)


class ConversionChainTest(unittest.TestCase):
    def test_converted_policy_keeps_its_share(self):
        epsilon, localEpsilon = 0.1, 0.2
        factor = (1.0 - 2 * epsilon) * (1.0 - 3 * localEpsilon)
        for seed in range(10):
            inst = GenRandom(6, 4, 0.3, 0.9, FUNCTION_TYPE_COVERAGE, CreateStream(seed), budget=40.0)
            oracle = CreateOracle(inst)
            policy = CreateNonAdaptivePolicy(inst, inst.x_nodes, inst.ground)
            original = ValueNonAdaptive(inst, oracle, policy.second)
            self.assertTrue(original.exact)

            local = NonAdaptiveToLocal(inst, oracle, policy, localEpsilon, prune=False)
            self.assertEqual(CheckPolicy(inst, local), [])
            self.assertEqual(local.Second(), policy.second)
            adapted = LocalToLocallyAdaptive(local, epsilon)
            estimate = ValueLocallyAdaptive(inst, oracle, adapted, METHOD_MONTE_CARLO, 4000, CreateStream(300 + seed))
            self.assertGreaterEqual(estimate.Upper(3.0), factor * original.mean)


class HardnessTest(unittest.TestCase):
    def test_clique_beats_sparse_graph(self):
        clique = GenHardnessInstance(6, 1.7)
        sparse = GenHardnessInstance(6, 1.7, "sparse", CreateStream(3), 0.0)
        a = ValueNonAdaptive(clique, CreateOracle(clique), clique.ground).mean
        b = ValueNonAdaptive(sparse, CreateOracle(sparse), sparse.ground).mean
        self.assertGreater(a, b)

    def test_clique_arithmetic(self):
        inst = GenHardnessInstance(5, 1.7)
        estimate = ValueNonAdaptive(inst, CreateOracle(inst), inst.ground)
        self.assertTrue(estimate.exact)
        p = 0.34
        expected = 1.0 - 0.5 * 5 * p * (1.0 - p) ** 4 - (1.0 - p) ** 5
        self.assertAlmostEqual(estimate.mean, expected, delta=1e-12)
        self.assertAlmostEqual(CliqueExpectedValue(5, 1.7), expected, delta=1e-12)

        limit = HardnessReference(1.7).completeness
        self.assertAlmostEqual(limit, 1.0 - (1.7 / 2 + 1.0) * math.exp(-1.7), places=12)
        distances = [CliqueExpectedValue(l, 1.7) - limit for l in (5, 20, 100)]
        self.assertGreater(distances[0], distances[1])
        self.assertGreater(distances[1], distances[2])
        self.assertGreater(distances[2], 0.0)
        self.assertEqual(round(HardnessReference(1.7).ratio, 3), 0.865)


class OracleContractTest(unittest.TestCase):
    def tearDown(self):
        ResetConfig()

    def test_every_family(self):
        instances = [GenRandom(4, 3, 0.5, 0.5, family, CreateStream(9))
                     for family in (FUNCTION_TYPE_COVERAGE, FUNCTION_TYPE_MRS, FUNCTION_TYPE_ANY_NONEMPTY,
                                    FUNCTION_TYPE_EDGE_WITNESS)]
        instances.append(GenGapLa(2))
        for inst in instances:
            report = CheckOracle(CreateOracle(inst), 10_000, CreateStream(4))
            self.assertTrue(report.Passed(), msg=f"{inst.function['type']}: {report.violations[:3]}")


if __name__ == "__main__":
    unittest.main()
