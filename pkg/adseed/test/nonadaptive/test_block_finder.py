import unittest

from adseed.core.error import CapExceededError
from adseed.core.internal import *
from adseed.core.policy import EMPTY_NONADAPTIVE, CreateNonAdaptivePolicy
from adseed.functions.factory import CreateOracle
from adseed.nonadaptive.block_finder import EnumerateSubsets, EnumBlockFinder, FindBlockEnum, BlockKey
from adseed.test.fixtures import StarInstance


class EnumerateSubsetsTest(unittest.TestCase):
    def test_subsets_within_the_limit(self):
        found = []
        EnumerateSubsets(["a", "b", "c"], [0.5, 0.5, 1.0], 1.0, 100, found)
        self.assertEqual(sorted(sorted(s) for s in found), [["a"], ["a", "b"], ["b"], ["c"]])

    def test_cap(self):
        with self.assertRaises(CapExceededError) as ctx:
            EnumerateSubsets(["a", "b", "c"], [0.1, 0.1, 0.1], 1.0, 5, [])
        self.assertEqual(ctx.exception.code, ADSEED_ERR_CAP_CANDIDATES)


class EnumBlockFinderTest(unittest.TestCase):
    def setUp(self):
        self.inst = StarInstance()
        self.oracle = CreateOracle(self.inst)

    def test_densest_block(self):
        block = FindBlockEnum(self.inst, self.oracle, EMPTY_NONADAPTIVE, 0.5)
        # b with y4 covers two elements for sure at cost 2; adding y3 ties and costs more
        self.assertEqual((block.x, block.second), ("b", frozenset({"y4"})))
        self.assertTrue(block.marginal.exact)
        self.assertAlmostEqual(block.marginal.mean, 2.0)
        self.assertAlmostEqual(block.cost, 2.0)
        self.assertAlmostEqual(block.density, 1.0)

    def test_candidates_skip_seeded_neighbors(self):
        state = CreateNonAdaptivePolicy(self.inst, ["b"], ["y4"])
        finder = EnumBlockFinder(self.inst, self.oracle, 0.5)
        candidates = finder.Candidates(state)
        self.assertTrue(all("y4" not in second for _, second in candidates))
        # a: 7 subsets of {y1, y2, y3}; b: only {y3}
        self.assertEqual(len(candidates), 8)
        block = finder.Find(state)
        self.assertEqual(block.x, "a")
        self.assertEqual(block.second, frozenset({"y1", "y2", "y3"}))

    def test_expected_size_limit(self):
        finder = EnumBlockFinder(self.inst, self.oracle, 2.0)
        # 1/eps = 0.5 leaves single neighbors only
        for _, second in finder.Candidates(EMPTY_NONADAPTIVE):
            self.assertLessEqual(self.inst.ExpectedCost(second), 0.5 + 1e-9)

    def test_block_key(self):
        self.assertEqual(BlockKey("x", frozenset({"b", "a"})), ("x", ("a", "b")))


if __name__ == "__main__":
    unittest.main()
