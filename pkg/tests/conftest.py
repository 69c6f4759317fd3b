"""Shared test oracles.

These deliberately avoid the library's own evaluation paths: the rational
oracle multiplies exact fractions, and the log oracle uses math.fsum over
individually computed log1p terms.  Agreement between an oracle and the
library is therefore evidence, not tautology.
"""

import math
from fractions import Fraction

import pytest


def rational_collision(t, p: int) -> Fraction:
    """Exact collision probability 1 - prod (t-n)/t as a Fraction."""
    t = Fraction(t)
    surv = Fraction(1)
    for n in range(p):
        factor = (t - n) / t
        if factor <= 0:
            return Fraction(1)
        surv *= factor
    return 1 - surv


def fsum_survival_log(t: float, p: int) -> float:
    """Brute-force log-survival via exact (Shewchuk) float summation."""
    return math.fsum(math.log1p(-n / t) for n in range(1, p))


@pytest.fixture(scope="session")
def galton_space():
    return 2**36
