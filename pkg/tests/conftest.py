"""Shared fields and window presets.

Module tests run on shortened transients (the located objects are strongly
hyperbolic at the epsilon values used, so short windows already converge far
below the thresholds); the acceptance suite uses the full windows.
"""

from __future__ import annotations

import math

import numpy as np
import pytest

from cubicbif import CubicField, Harmonic, Numerics, TrigPoly, TrigRatio

SQRT3 = math.sqrt(3.0)


def trig_k() -> TrigPoly:
    return TrigPoly(2.0, (Harmonic(0.5, SQRT3, 0.0, "sin"),))


def trig_b() -> TrigPoly:
    return TrigPoly(2.1, (Harmonic(0.3, 1.0, 0.0, "cos"),))


def worked_field() -> CubicField:
    """x' = -x^3/k + x^2 + eps*b*(x - 2.6) with k = 2+0.5 sin(sqrt3 t),
    b = 2.1+0.3 cos t, rewritten with scale = 1/k."""
    k = trig_k()
    return CubicField.with_threshold(
        c=k, b=k * trig_b(), s=2.6, scale=TrigRatio(TrigPoly.constant(1.0), k))


@pytest.fixture(scope="session")
def eq42():
    return worked_field()


@pytest.fixture(scope="session")
def case2_field():
    # inf c = 1.5 > 1.4 = -a/b
    return CubicField.with_threshold(c=trig_k(), b=trig_b(), s=1.4)


@pytest.fixture(scope="session")
def case3_field():
    # constant threshold: c = s = 2.6
    return CubicField.with_threshold(c=TrigPoly.constant(2.6), b=trig_b(), s=2.6)


@pytest.fixture(scope="session")
def cubic_autonomous():
    # -x^3 + x^2 - eps: folds at 0 and 4/27
    return CubicField(1.0, 0.0, -1.0)


# short windows for module tests
FAST = Numerics(t_run=2.0e3, t_eval=250.0)
# coarse step for autonomous fields (their dynamics carry no fast forcing)
FAST_AUTON = Numerics(h=2.0 ** -6, t_run=2.0e3, t_eval=64.0)


@pytest.fixture(scope="session")
def eq42_sets(eq42):
    """Branch sets of the worked example reused across test modules."""
    from cubicbif import branch_set

    return {eps: branch_set(eq42, eps, FAST) for eps in (0.0, 0.05, 0.1, 0.15)}
