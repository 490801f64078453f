import math
import unittest

from adseed.core.error import InputError, SmallBudgetError
from adseed.core.policy import *
from adseed.evaluation.evaluator import ValueLocallyAdaptive, ValueNonAdaptive
from adseed.functions.factory import CreateOracle
from adseed.functions.function_api import FUNCTION_TYPE_COVERAGE
from adseed.harness.generators import GenRandom
from adseed.nonadaptive.crs import CrsAdapt, NaToAdaptive
from adseed.nonadaptive.greedy import NonAdaptiveGreedy, ParentChildGreedy
from adseed.nonadaptive.repair import SmallKFallback, TrimFirstStage, ExclusiveChildren
from adseed.nonadaptive.trace import GreedyTrace, TRACE_COLUMNS
from adseed.oracle.bruteforce import OptNonAdaptiveBruteforce
from adseed.test.fixtures import CoverageInstance, StarInstance, StarsInstance, UnitCoverageInstance
from adseed.utils.stream import CreateStream


class NonAdaptiveGreedyTest(unittest.TestCase):
    def setUp(self):
        self.inst = StarsInstance(6, 4, 0.5, 20)
        self.oracle = CreateOracle(self.inst)

    def test_whole_stars_until_the_reserve(self):
        policy, trace = NonAdaptiveGreedy(self.inst, self.oracle, epsilon=0.5)
        # blocks cost 3 each; the loop runs while the cost is at most 20 - 3/0.5
        self.assertEqual(len(trace), 5)
        self.assertEqual(policy.first, frozenset(f"x{i}" for i in range(5)))
        self.assertAlmostEqual(Cost(policy), 15.0)
        self.assertEqual([e.first for e in trace.entries], [frozenset({f"x{i}"}) for i in range(5)])
        self.assertAlmostEqual(trace.entries[-1].value, 10.0)

    def test_costs_grow_within_budget(self):
        inst = CoverageInstance({"a": ["y1", "y2", "y3"], "b": ["y3", "y4"]},
                                {"y1": 0.5, "y2": 0.5, "y3": 0.25, "y4": 1.0}, 12.0,
                                {"y1": ["u1"], "y2": ["u1", "u2"], "y3": ["u3"], "y4": ["u2", "u4"]})
        policy, trace = NonAdaptiveGreedy(inst, CreateOracle(inst), epsilon=0.5)
        costs = trace.Costs()
        self.assertGreater(len(costs), 0)
        for a, b in zip(costs, costs[1:]):
            self.assertLess(a, b)
        self.assertAlmostEqual(Cost(policy), costs[-1])
        self.assertEqual(CheckPolicy(inst, policy), [])

    def test_small_budget(self):
        with self.assertRaises(SmallBudgetError):
            NonAdaptiveGreedy(self.inst, self.oracle, k=6, epsilon=0.5)

    def test_parent_child_greedy(self):
        policy, trace = ParentChildGreedy(self.inst, self.oracle)
        self.assertEqual(len(policy.second), 24)
        self.assertEqual(len(policy.first), 6)
        self.assertAlmostEqual(Cost(policy), 18.0)
        self.assertEqual(CheckPolicy(self.inst, policy), [])
        self.assertEqual(len(trace), 24)
        # every star parent is paid for exactly once
        self.assertEqual(sum(len(e.first) for e in trace.entries), 6)


class AscentTest(unittest.TestCase):
    # with eps = 1/2 an optimal (S, T) splits into candidate blocks of total price <= 2k,
    # or <= 1.5k when every p is 1; the densest block beats the average
    def _Check(self, inst, factor):
        oracle = CreateOracle(inst)
        k = inst.budget
        _, optimum = OptNonAdaptiveBruteforce(inst, oracle, k)
        policy, trace = NonAdaptiveGreedy(inst, oracle, k, epsilon=0.5)
        self.assertGreater(len(trace), 0)
        before = 0.0
        for entry in trace.entries:
            self.assertGreaterEqual(entry.density + 1e-9, (optimum - before) / (factor * k))
            before = entry.value
        self.assertAlmostEqual(ValueNonAdaptive(inst, oracle, policy.second).mean, before, places=9)
        return optimum, before, Cost(policy)

    def test_ascent_against_bruteforce(self):
        for seed in range(6):
            inst = GenRandom(4, 3, 0.3, 0.9, FUNCTION_TYPE_COVERAGE, CreateStream(seed), budget=8.0)
            optimum, value, cost = self._Check(inst, 2.0)
            self.assertLessEqual(value, optimum + 1e-9)
            self.assertGreaterEqual(value + 1e-9, (1.0 - math.exp(-cost / (2.0 * inst.budget))) * optimum)

    def test_warm_up_with_certain_neighbors(self):
        for seed in range(6):
            inst = GenRandom(4, 3, 1.0, 1.0, FUNCTION_TYPE_COVERAGE, CreateStream(seed), budget=8.0)
            optimum, value, cost = self._Check(inst, 1.5)
            self.assertGreaterEqual(value + 1e-9, (1.0 - math.exp(-cost / (1.5 * inst.budget))) * optimum)


class RepairTest(unittest.TestCase):
    def setUp(self):
        # stars of 2, 3 and 3 children
        neighbors = {"x0": ["y0_0", "y0_1"], "x1": ["y1_0", "y1_1", "y1_2"], "x2": ["y2_0", "y2_1", "y2_2"]}
        self.inst = UnitCoverageInstance(neighbors, {y: 0.5 for ys in neighbors.values() for y in ys}, 10)
        self.oracle = CreateOracle(self.inst)
        self.policy = CreateNonAdaptivePolicy(self.inst, ["x0", "x1", "x2"], self.inst.ground)

    def test_trim_removes_whole_stars(self):
        trimmed = TrimFirstStage(self.inst, self.oracle, self.policy, 1.0)
        self.assertEqual(trimmed.first, frozenset({"x1", "x2"}))
        self.assertEqual(trimmed.second, self.inst.NeighborsOf(["x1", "x2"]))

    def test_trim_limits(self):
        with self.assertRaises(InputError):
            TrimFirstStage(self.inst, self.oracle, self.policy, 3.0)
        with self.assertRaises(InputError):
            TrimFirstStage(self.inst, self.oracle, EMPTY_NONADAPTIVE, 1.0)

    def test_trim_symmetric_stars(self):
        inst = StarsInstance(10, 2, 0.5, 20)
        oracle = CreateOracle(inst)
        policy = CreateNonAdaptivePolicy(inst, inst.x_nodes, inst.ground)
        trimmed = TrimFirstStage(inst, oracle, policy, 1.0)
        self.assertEqual(len(trimmed.first), 9)
        self.assertAlmostEqual(ValueNonAdaptive(inst, oracle, trimmed.second).mean, 9.0, places=12)

    def test_trim_keeps_its_share_of_the_value(self):
        # value after removing ceil(c) of |S| nodes >= (1 - ceil(c)/|S|) F(T)
        for seed in range(8):
            inst = GenRandom(5, 3, 0.3, 0.9, FUNCTION_TYPE_COVERAGE, CreateStream(seed), budget=20.0)
            oracle = CreateOracle(inst)
            policy = CreateNonAdaptivePolicy(inst, inst.x_nodes, inst.ground)
            total = ValueNonAdaptive(inst, oracle, policy.second).mean
            for c in (1.0, 2.0, 2.5):
                trimmed = TrimFirstStage(inst, oracle, policy, c)
                removed = math.ceil(c)
                self.assertEqual(len(trimmed.first), 5 - removed)
                value = ValueNonAdaptive(inst, oracle, trimmed.second).mean
                self.assertGreaterEqual(value + 1e-9, (1.0 - removed / 5.0) * total)

    def test_exclusive_children(self):
        inst = StarInstance()
        self.assertEqual(ExclusiveChildren(inst, {"a", "b"}, {"y1", "y3", "y4"}, "a"), frozenset({"y1"}))

    def test_small_k_fallback_is_optimal(self):
        inst = StarInstance()
        oracle = CreateOracle(inst)
        policy = SmallKFallback(inst, oracle)
        self.assertEqual(policy.blocks, (AdaptiveBlockSpec(frozenset({"b"}), 2, BLOCK_MODE_EXACT),))
        # y4 always, y3 when it realizes
        self.assertAlmostEqual(ValueLocallyAdaptive(inst, oracle, policy).mean, 2.25, places=12)


class CrsTest(unittest.TestCase):
    def test_crs_block(self):
        inst = StarsInstance(2, 3, 0.5, 6)
        policy = CreateNonAdaptivePolicy(inst, ["x0"], ["y0_0", "y0_1"])
        adapted = CrsAdapt(inst, policy, 0.1)
        block, = adapted.blocks
        self.assertEqual(block.mode, BLOCK_MODE_CRS)
        self.assertEqual(block.second_budget, 5)
        self.assertAlmostEqual(block.keep_prob, 0.9)
        self.assertEqual(block.second, frozenset({"y0_0", "y0_1"}))
        self.assertEqual(CheckPolicy(inst, adapted), [])

    def test_crs_rejects_bad_epsilon(self):
        inst = StarsInstance(1, 1, 0.5, 2)
        with self.assertRaises(InputError):
            CrsAdapt(inst, EMPTY_NONADAPTIVE, 1.5)
        self.assertEqual(CrsAdapt(inst, EMPTY_NONADAPTIVE, 0.1).blocks, ())

    def test_pipeline(self):
        inst = StarsInstance(6, 4, 0.5, 20)
        policy, trace = NaToAdaptive(inst, CreateOracle(inst), epsilon=0.5)
        self.assertEqual(len(trace), 5)
        block, = policy.blocks
        self.assertEqual(block.second_budget, 15)
        self.assertAlmostEqual(block.keep_prob, 1.0 - 0.5 / 4)
        self.assertEqual(len(block.second), 20)
        self.assertEqual(CheckPolicy(inst, policy), [])

    def test_pipeline_small_budget(self):
        inst = StarInstance()
        policy, trace = NaToAdaptive(inst, CreateOracle(inst), epsilon=0.5)
        self.assertIsNone(trace)
        self.assertEqual(policy.blocks[0].mode, BLOCK_MODE_EXACT)


class TraceTest(unittest.TestCase):
    def test_csv(self):
        trace = GreedyTrace()
        trace.Append({"x"}, {"b", "a"}, 0.5, 0.25, 2.0, 0.5)
        trace.Append({"x", "w"}, (), 0.25, 0.1, 4.0, 0.75, budget=2)
        lines = trace.RenderCsv().splitlines()
        self.assertEqual(lines[0], ",".join(TRACE_COLUMNS))
        self.assertEqual(lines[1], '0,"{x}:{a,b}",0.5,0.25,2.0,0.5')
        self.assertEqual(lines[2], '1,"{w,x}:t=2",0.25,0.1,4.0,0.75')
        self.assertEqual(trace.Costs(), [2.0, 4.0])


if __name__ == "__main__":
    unittest.main()
