import unittest

import numpy as np

from adseed.functions.check import CheckOracle
from adseed.functions.oracle import Oracle
from adseed.functions.special import AnyNonEmptyOracle
from adseed.utils.stream import CreateStream


class SquareOracle(Oracle):
    # |T|^2 is monotone but supermodular
    def _EvaluateBatch(self, masks: np.ndarray) -> np.ndarray:
        return masks.sum(axis=1).astype(float) ** 2


class CheckOracleTest(unittest.TestCase):
    def test_submodular_function_passes(self):
        report = CheckOracle(AnyNonEmptyOracle([f"y{i}" for i in range(6)]), 500, CreateStream(1))
        self.assertTrue(report.Passed())
        self.assertEqual(report.trials, 500)

    def test_supermodular_function_fails(self):
        report = CheckOracle(SquareOracle([f"y{i}" for i in range(6)]), 500, CreateStream(1))
        self.assertFalse(report.Passed())
        self.assertTrue(any("grew" in v for v in report.violations))
        self.assertLessEqual(len(report.violations), 20)


if __name__ == "__main__":
    unittest.main()
