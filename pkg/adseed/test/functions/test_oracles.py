import unittest

import numpy as np

from adseed.core.error import InputError
from adseed.core.instance import CreateInstance, SubsetBits
from adseed.core.internal import *
from adseed.functions.coverage import CoverageOracle
from adseed.functions.factory import CreateOracle
from adseed.functions.mrs import MrsOracle, ExpectedTruncatedCount
from adseed.functions.special import AnyNonEmptyOracle, EdgeWitnessOracle
from adseed.harness.generators import GenGapLa
from adseed.test.fixtures import StarInstance


def EnumeratedMultilinear(oracle, x):
    bits = SubsetBits(len(x))
    probs = np.prod(np.where(bits, x, 1.0 - x), axis=1)
    return float(probs @ oracle.ValueBatch(bits))


class CoverageTest(unittest.TestCase):
    def setUp(self):
        self.oracle = CreateOracle(StarInstance())

    def test_values(self):
        self.assertIsInstance(self.oracle, CoverageOracle)
        self.assertEqual(self.oracle.Value([]), 0.0)
        self.assertEqual(self.oracle.Value(["y2", "y4"]), 3.0)
        self.assertEqual(self.oracle.Value(["y1", "y2"]), 2.0)
        self.assertEqual(self.oracle.Marginal(["y2"], "y1"), 0.0)
        self.assertEqual(self.oracle.Marginal(["y1"], "y3"), 1.0)

    def test_query_count_counts_rows(self):
        self.oracle.ResetQueryCount()
        self.oracle.ValueBatch(np.zeros((5, self.oracle.Size()), dtype=bool))
        self.assertEqual(self.oracle.QueryCount, 5)

    def test_batch_shape_is_checked(self):
        with self.assertRaises(InputError):
            self.oracle.ValueBatch(np.zeros((2, 3), dtype=bool))

    def test_multilinear_matches_enumeration(self):
        rng = np.random.default_rng(3)
        for _ in range(20):
            x = rng.random(self.oracle.Size())
            self.assertAlmostEqual(self.oracle.Multilinear(x), EnumeratedMultilinear(self.oracle, x), places=12)

    def test_gradient_matches_differences(self):
        x = np.array([0.2, 0.7, 0.4, 0.9])
        grad = self.oracle.MultilinearGradient(x)
        h = 1e-6
        for i in range(len(x)):
            up, down = x.copy(), x.copy()
            up[i] += h
            down[i] -= h
            numeric = (self.oracle.Multilinear(up) - self.oracle.Multilinear(down)) / (2 * h)
            self.assertAlmostEqual(grad[i], numeric, places=6)


class MrsTest(unittest.TestCase):
    def setUp(self):
        ground = ["a", "b", "c", "d"]
        terms = [
            {"weight": 2.0, "parts": [{"members": ["a", "b", "c"], "capacity": 2}, {"members": ["d"], "capacity": 1}]},
            {"weight": 1.0, "parts": [{"members": ["a", "d"], "capacity": 1}]},
        ]
        self.oracle = MrsOracle(ground, terms)

    def test_values(self):
        self.assertEqual(self.oracle.Value(["a", "b", "c"]), 2.0 * 2 + 1.0)
        self.assertEqual(self.oracle.Value(["d"]), 2.0 + 1.0)
        self.assertEqual(self.oracle.Value(["a", "b", "c", "d"]), 2.0 * 3 + 1.0)

    def test_multilinear_matches_enumeration(self):
        x = np.array([0.3, 0.5, 0.8, 0.1])
        self.assertAlmostEqual(self.oracle.Multilinear(x), EnumeratedMultilinear(self.oracle, x), places=12)

    def test_truncated_count(self):
        x = np.array([[0.5, 0.5]])
        # E[min(1, N)] with N ~ Bin(2, 1/2)
        self.assertAlmostEqual(float(ExpectedTruncatedCount(x, 1)[0]), 0.75)
        self.assertAlmostEqual(float(ExpectedTruncatedCount(x, 2)[0]), 1.0)

    def test_overlapping_parts(self):
        with self.assertRaises(InputError):
            MrsOracle(["a", "b"], [{"parts": [{"members": ["a"]}, {"members": ["a", "b"]}]}])


class SpecialFamiliesTest(unittest.TestCase):
    def test_any_nonempty(self):
        oracle = AnyNonEmptyOracle(["a", "b", "c"])
        self.assertEqual(oracle.Value([]), 0.0)
        self.assertEqual(oracle.Value(["b", "c"]), 1.0)
        x = np.array([0.5, 0.5, 0.5])
        self.assertAlmostEqual(oracle.Multilinear(x), 1.0 - 0.125)

    def test_edge_witness(self):
        oracle = EdgeWitnessOracle(["a", "b", "c"], [["a", "b"]])
        self.assertFalse(oracle.HasClosedForm())
        self.assertEqual(oracle.Value([]), 0.0)
        self.assertEqual(oracle.Value(["a"]), 0.5)
        self.assertEqual(oracle.Value(["a", "c"]), 0.75)
        self.assertEqual(oracle.Value(["a", "b"]), 1.0)
        self.assertEqual(oracle.Marginal(["a"], "b"), 0.5)
        self.assertEqual(oracle.Marginal(["a"], "c"), 0.25)
        self.assertEqual(oracle.Marginal(["a", "b"], "c"), 0.0)

    def test_edge_witness_unknown_ids(self):
        oracle = EdgeWitnessOracle(["a", "b", "c"], [["a", "b"]])
        with self.assertRaises(InputError) as ctx:
            oracle.Marginal(["a", "zz"], "c")
        self.assertEqual(ctx.exception.code, ADSEED_ERR_INPUT_NEIGHBOR)
        with self.assertRaises(InputError):
            oracle.Marginal(["a"], "zz")
        with self.assertRaises(InputError):
            oracle.HasEdge(["zz"])
        with self.assertRaises(InputError):
            EdgeWitnessOracle(["a", "b"], [["a", "zz"]])

    def test_self_loop(self):
        with self.assertRaises(InputError):
            EdgeWitnessOracle(["a"], [["a", "a"]])

    def test_product_gap(self):
        inst = GenGapLa(2)
        oracle = CreateOracle(inst)
        self.assertEqual(oracle.Value(["s0"]), 0.5)
        self.assertEqual(oracle.Value(["s0", "s1"]), 0.75)
        self.assertAlmostEqual(oracle.Value(["r0_0", "r0_1"]), 0.25)
        # realized expectation at p: each factor is 1 - 1/4 - 4/8
        self.assertAlmostEqual(oracle.Multilinear(inst.p), 1.0 - 0.25 ** 2, places=12)
        self.assertAlmostEqual(oracle.Multilinear(inst.p), EnumeratedMultilinear(oracle, inst.p), places=12)


class FactoryTest(unittest.TestCase):
    def test_unknown_family(self):
        inst = CreateInstance(["x"], {"x": ["y"]}, {"y": 0.5}, 2, {"type": "cubic"})
        with self.assertRaises(InputError) as ctx:
            CreateOracle(inst)
        self.assertEqual(ctx.exception.code, ADSEED_ERR_INPUT_FUNCTION)

    def test_malformed_descriptor(self):
        inst = CreateInstance(["x"], {"x": ["y"]}, {"y": 0.5}, 2, {"type": "coverage", "universe": {}})
        with self.assertRaises(InputError):
            CreateOracle(inst)

    def test_missing_descriptor(self):
        with self.assertRaises(InputError):
            CreateOracle(CreateInstance(["x"], {"x": ["y"]}, {"y": 0.5}, 2))


if __name__ == "__main__":
    unittest.main()
