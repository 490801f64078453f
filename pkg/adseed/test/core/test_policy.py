import unittest

from adseed.core.codec import RenderPolicy, ParsePolicy, RenderInstance, ParseInstance, WriteAtomic, ReadText
from adseed.core.error import InputError
from adseed.core.internal import *
from adseed.core.policy import *
from adseed.test.fixtures import StarInstance


class PolicyTest(unittest.TestCase):
    def setUp(self):
        self.inst = StarInstance()

    def test_costs(self):
        na = CreateNonAdaptivePolicy(self.inst, ["a"], ["y1", "y3"])
        self.assertAlmostEqual(Cost(na), 1.75)

        local = EpsilonLocalPolicy((BudgetedBlock(frozenset({"a", "b"}), 2.5, frozenset({"y4"}), {"y4": 1.0}),), 0.5)
        self.assertAlmostEqual(Cost(local), 4.5)

        la = LocallyAdaptivePolicy((AdaptiveBlockSpec(frozenset({"a"}), 2), AdaptiveBlockSpec(frozenset({"b"}), 1)))
        self.assertEqual(Cost(la), 5)
        self.assertEqual(la.First(), frozenset({"a", "b"}))

    def test_over_budget_is_a_violation(self):
        policy = CreateNonAdaptivePolicy(self.inst, ["a", "b"], ["y1", "y2", "y4"])
        violations = CheckPolicy(self.inst, policy)
        self.assertEqual(len(violations), 1)
        self.assertIn("exceeds budget", violations[0])

    def test_second_stage_must_be_reachable(self):
        policy = CreateNonAdaptivePolicy(self.inst, ["b"], ["y1"])
        self.assertTrue(any("not neighbors" in v for v in CheckPolicy(self.inst, policy)))

    def test_crs_block_checks(self):
        block = AdaptiveBlockSpec(frozenset({"a"}), 1, BLOCK_MODE_CRS, keep_prob=0.9, cap=2.0,
                                  second=frozenset({"y1"}))
        violations = CheckPolicy(self.inst, LocallyAdaptivePolicy((block,)))
        self.assertTrue(any("cap must not exceed" in v for v in violations))

    def test_block_limits_follow_epsilon(self):
        self.assertEqual(BlockSizeLimit(0.5), 4)
        self.assertEqual(BlockBudgetLimit(0.5), 4)
        self.assertEqual(BlockBudgetLimit(0.3), 7)
        block = AdaptiveBlockSpec(frozenset({"a"}), 5)
        violations = CheckPolicy(self.inst, LocallyAdaptivePolicy((block,), 0.5), budget=10)
        self.assertTrue(any("exceeds 4" in v for v in violations))

    def test_budgeted_block_bounds(self):
        def local(budget):
            block = BudgetedBlock(frozenset({"b"}), budget, frozenset({"y4"}), {"y4": 1.0})
            return EpsilonLocalPolicy((block,), 0.5)
        self.assertEqual(CheckPolicy(self.inst, local(2.0), budget=10), [])
        self.assertEqual(CheckPolicy(self.inst, local(4.0), budget=10), [])
        low = CheckPolicy(self.inst, local(1.5), budget=10)
        self.assertTrue(any("below 1/epsilon" in v for v in low))
        high = CheckPolicy(self.inst, local(4.5), budget=10)
        self.assertTrue(any("exceeds 2/epsilon" in v for v in high))

    def test_kind(self):
        self.assertEqual(PolicyKind(EMPTY_NONADAPTIVE), POLICY_KIND_NONADAPTIVE)
        with self.assertRaises(InputError):
            PolicyKind("not a policy")


class CodecTest(unittest.TestCase):
    def test_crs_policy_survives_a_file(self):
        block = AdaptiveBlockSpec(frozenset({"a"}), 2, BLOCK_MODE_CRS, keep_prob=0.75, cap=2.0,
                                  second=frozenset({"y1", "y2"}))
        policy = LocallyAdaptivePolicy((block, AdaptiveBlockSpec(frozenset({"b"}), 1, BLOCK_MODE_EXACT)), 0.25)
        self.assertEqual(ParsePolicy(RenderPolicy(policy)), policy)

    def test_instance_text_is_stable(self):
        inst = StarInstance()
        text = RenderInstance(inst)
        self.assertEqual(RenderInstance(ParseInstance(text)), text)

    def test_malformed_json(self):
        with self.assertRaises(InputError) as ctx:
            ParseInstance("{not json")
        self.assertEqual(ctx.exception.code, ADSEED_ERR_INPUT_FORMAT)
        with self.assertRaises(InputError):
            ParsePolicy('{"kind": "mystery"}')
        with self.assertRaises(InputError):
            ParseInstance('{"x_nodes": []}')

    def test_missing_file(self):
        with self.assertRaises(InputError) as ctx:
            ReadText("/nonexistent/adseed/instance.json")
        self.assertEqual(ctx.exception.ExitCode(), 2)

    def test_write_atomic(self):
        import os
        import tempfile
        with tempfile.TemporaryDirectory() as directory:
            path = os.path.join(directory, "out.json")
            WriteAtomic(path, "first")
            WriteAtomic(path, "second")
            self.assertEqual(ReadText(path), "second")
            self.assertEqual(os.listdir(directory), ["out.json"])


if __name__ == "__main__":
    unittest.main()
