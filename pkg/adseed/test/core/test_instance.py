import unittest

import numpy as np

from adseed.core.error import CapExceededError, InputError
from adseed.core.instance import (CreateInstance, ValidateInstance, EnumerateRealizationMatrix,
                                  EnumerateRealizations, IterRealizationChunks, SampleRealizationMatrix)
from adseed.core.internal import *
from adseed.test.fixtures import StarInstance
from adseed.utils.stream import CreateStream


class InstanceTest(unittest.TestCase):
    def test_ground_follows_first_appearance(self):
        inst = StarInstance()
        self.assertEqual(inst.ground, ("y1", "y2", "y3", "y4"))
        self.assertEqual(inst.parents["y3"], ("a", "b"))
        self.assertEqual(inst.NeighborsOf(["b"]), frozenset({"y3", "y4"}))
        self.assertAlmostEqual(inst.ExpectedCost(["y1", "y3"]), 0.75)

    def test_mask_rejects_unknown_ids(self):
        inst = StarInstance()
        self.assertEqual(inst.Ids(inst.Mask(["y2", "y4"])), frozenset({"y2", "y4"}))
        with self.assertRaises(InputError) as ctx:
            inst.Mask(["nope"])
        self.assertEqual(ctx.exception.code, ADSEED_ERR_INPUT_NEIGHBOR)

    def test_valid_instance_has_no_violations(self):
        self.assertEqual(ValidateInstance(StarInstance()), [])

    def test_violations_are_reported(self):
        inst = CreateInstance(["x", "x"], {"x": ["y", "y"], "z": ["w"]}, {"y": 0.0}, 0.5)
        violations = ValidateInstance(inst)
        joined = " | ".join(violations)
        self.assertIn("duplicate first-stage", joined)
        self.assertIn("unknown first-stage node 'z'", joined)
        self.assertIn("duplicate neighbor ids", joined)
        self.assertIn("outside (0,1]", joined)
        self.assertIn("below 1", joined)

    def test_neighbor_that_is_also_first_stage(self):
        inst = CreateInstance(["x", "y"], {"x": ["y"]}, {"y": 0.5}, 2)
        self.assertTrue(any("also a first-stage node" in v for v in ValidateInstance(inst)))


class RealizationTest(unittest.TestCase):
    def test_enumeration_probabilities_sum_to_one(self):
        inst = StarInstance()
        bits, probs = EnumerateRealizationMatrix(inst, ["y1", "y3", "y4"])
        self.assertEqual(bits.shape, (8, 3))
        self.assertAlmostEqual(float(probs.sum()), 1.0, places=12)
        # y4 has probability 1: rows without it have probability 0
        self.assertTrue(np.all(probs[~bits[:, 2]] == 0.0))

    def test_enumerate_realizations_yields_sets(self):
        inst = StarInstance()
        found = dict(EnumerateRealizations(inst, ["y1", "y2"]))
        self.assertEqual(len(found), 4)
        self.assertAlmostEqual(sum(found.values()), 1.0)

    def test_enumeration_limit(self):
        inst = StarInstance()
        with self.assertRaises(CapExceededError) as ctx:
            EnumerateRealizationMatrix(inst, ["y1", "y2", "y3"], limit=2)
        self.assertEqual(ctx.exception.code, ADSEED_ERR_CAP_ENUMERATION)
        self.assertEqual(ctx.exception.ExitCode(), 3)

    def test_chunks_cover_every_realization(self):
        p = np.array([0.1, 0.2, 0.3, 0.4, 0.5])
        chunks = list(IterRealizationChunks(p, chunk=7))
        self.assertEqual(sum(bits.shape[0] for bits, _ in chunks), 32)
        self.assertAlmostEqual(sum(float(probs.sum()) for _, probs in chunks), 1.0, places=12)

    def test_sampling_is_deterministic_per_seed(self):
        p = np.array([0.3, 0.6, 0.9])
        a = SampleRealizationMatrix(p, 100, CreateStream(7).rng)
        b = SampleRealizationMatrix(p, 100, CreateStream(7).rng)
        self.assertTrue(np.array_equal(a, b))


if __name__ == "__main__":
    unittest.main()
