import logging

from dataclasses import dataclass, field
from typing import List

import numpy as np

from ..utils.stream import Stream
from .function_api import *
from .oracle import Oracle

logger = logging.getLogger("adseed.functions")

CHECK_CHUNK = 2048
MAX_REPORTED = 20


"""
" class OracleCheckReport
"""
@dataclass
class OracleCheckReport:
    trials: int
    violation_count: int = 0
    violations: List[str] = field(default_factory=list)

    def Passed(self) -> bool:
        return self.violation_count == 0


"""
" function CheckOracle
" Spot-checks normalization, monotonicity and diminishing returns on
" random chains S <= T with a not in T. Each trial costs one batch of
" four rows: S, S+a, T, T+a.
"""
def CheckOracle(oracle: Oracle, trials: int, stream: Stream, tol: float = ORACLE_CHECK_TOL) -> OracleCheckReport:
    report = OracleCheckReport(trials)
    n = oracle.Size()

    def record(message: str):
        report.violation_count += 1
        if len(report.violations) < MAX_REPORTED:
            report.violations.append(message)

    empty = float(oracle.ValueBatch(np.zeros((1, n), dtype=bool))[0])
    if abs(empty) > tol:
        record(f"f(empty) = {empty:.12g}")

    if n == 0:
        return report

    for start in range(0, trials, CHECK_CHUNK):
        count = min(CHECK_CHUNK, trials - start)
        rng = stream.Derive(start // CHECK_CHUNK).rng

        order = rng.random((count, n))
        a = rng.integers(0, n, size=count)
        order[np.arange(count), a] = 1.0
        t = rng.random(count)
        s = t * rng.random(count)
        small = order < s[:, None]
        large = order < t[:, None]

        rows = np.empty((4 * count, n), dtype=bool)
        rows[0::4] = small
        rows[1::4] = small
        rows[1::4][np.arange(count), a] = True
        rows[2::4] = large
        rows[3::4] = large
        rows[3::4][np.arange(count), a] = True

        values = oracle.ValueBatch(rows).reshape(count, 4)
        fS, fSa, fT, fTa = values.T

        for i in np.flatnonzero(np.minimum.reduce([fS, fSa, fT, fTa]) < -tol):
            record(f"trial {start + i}: negative value")
        for i in np.flatnonzero(fS > fT + tol):
            record(f"trial {start + i}: f(S)={fS[i]:.12g} > f(T)={fT[i]:.12g} for S <= T")
        for i in np.flatnonzero((fS > fSa + tol) | (fT > fTa + tol)):
            record(f"trial {start + i}: adding element {oracle.Ground()[a[i]]} decreased the value")
        for i in np.flatnonzero(fSa - fS < fTa - fT - tol):
            record(f"trial {start + i}: marginal of {oracle.Ground()[a[i]]} grew from "
                   f"{fSa[i] - fS[i]:.12g} (|S|={small[i].sum()}) to {fTa[i] - fT[i]:.12g} (|T|={large[i].sum()})")

    if report.violation_count:
        logger.warning("[CheckOracle] %s: %d violations in %d trials",
                       type(oracle).__name__, report.violation_count, trials)
    return report
