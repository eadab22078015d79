"""Coefficient evaluation, exact means, certified bounds, exact products."""

from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cubicbif import Harmonic, TrigPoly, TrigRatio

from conftest import SQRT3, trig_b, trig_k


def test_eval_examples():
    b = trig_b()
    assert b(0.0) == pytest.approx(2.4, abs=1e-15)
    assert b(math.pi) == pytest.approx(1.8, abs=1e-12)
    assert TrigPoly.constant(2.6)(123.4) == 2.6


def test_mean_is_constant_term():
    assert trig_b().mean() == 2.1
    assert TrigPoly(2.0, (Harmonic(0.5, SQRT3, 0.0, "sin"),)).mean() == 2.0
    assert TrigPoly.constant(1.0).mean() == 1.0


def test_bounds_examples():
    assert trig_k().bounds() == (1.5, 2.5)
    assert trig_b().bounds() == (1.8, 2.4)


def test_bounds_conservative_vs_grid():
    # 1 + cos t + sin t: conservative (-1, 3); tight range 1 +- sqrt(2)
    p = TrigPoly(1.0, (Harmonic(1.0, 1.0, 0.0, "cos"), Harmonic(1.0, 1.0, 0.0, "sin")))
    assert p.bounds() == (-1.0, 3.0)
    # dense-grid oracle over many periods
    ts = np.arange(0.0, 200.0, 1e-3)
    vals = p(ts)
    assert vals.min() == pytest.approx(1.0 - math.sqrt(2.0), abs=1e-4)
    assert vals.max() == pytest.approx(1.0 + math.sqrt(2.0), abs=1e-4)
    lo, hi = p.grid_bounds()
    assert lo == pytest.approx(1.0 - math.sqrt(2.0), abs=1e-3)
    assert hi == pytest.approx(1.0 + math.sqrt(2.0), abs=1e-3)


def test_eval_within_bounds_bulk():
    # 1e6 uniform draws over [-1e4, 1e4] stay inside the certified bounds
    rng = np.random.default_rng(7)
    ts = rng.uniform(-1e4, 1e4, size=1_000_000)
    for p in (trig_k(), trig_b(), trig_k() * trig_b()):
        vals = p(ts)
        assert vals.min() >= p.lower_bound() - 1e-12
        assert vals.max() <= p.upper_bound() + 1e-12


harmonics_st = st.lists(
    st.builds(Harmonic,
              amplitude=st.floats(-3, 3, allow_nan=False),
              frequency=st.floats(0.05, 8, allow_nan=False),
              phase=st.floats(-3, 3, allow_nan=False),
              kind=st.sampled_from(["sin", "cos"])),
    max_size=4)


@settings(max_examples=60, deadline=None)
@given(const=st.floats(-5, 5, allow_nan=False), harms=harmonics_st,
       t=st.floats(-1e4, 1e4, allow_nan=False))
def test_eval_within_bounds_property(const, harms, t):
    p = TrigPoly(const, tuple(harms))
    v = p(t)
    assert p.lower_bound() - 1e-9 <= v <= p.upper_bound() + 1e-9


def _integral(p: TrigPoly, T: float) -> float:
    """Closed-form integral of p over [0, T] (test-side oracle)."""
    total = p.const * T
    for h in p.harmonics:
        th0, th1 = h.phase, h.frequency * T + h.phase
        if h.kind == "sin":
            total += h.amplitude * (math.cos(th0) - math.cos(th1)) / h.frequency
        else:
            total += h.amplitude * (math.sin(th1) - math.sin(th0)) / h.frequency
    return total


def test_running_average_converges_to_mean():
    T = 1.0e4
    for p in (trig_k(), trig_b(), trig_k() * trig_b()):
        avg = _integral(p, T) / T
        bound = sum(2.0 * abs(h.amplitude) / (h.frequency * T) for h in p.harmonics)
        assert abs(avg - p.mean()) <= bound


def test_product_is_exact():
    k, b = trig_k(), trig_b()
    prod = k * b
    ts = np.linspace(-40.0, 40.0, 1001)
    assert np.max(np.abs(prod(ts) - k(ts) * b(ts))) < 1e-13
    # mean of the product is exact too (no shared frequencies here)
    assert prod.mean() == pytest.approx(2.0 * 2.1, abs=1e-15)


def test_product_folds_matching_frequencies_into_constant():
    c = TrigPoly(0.0, (Harmonic(1.0, 1.0, 0.0, "cos"),))
    sq = c * c  # cos^2 t = 1/2 + cos(2t)/2
    assert sq.mean() == pytest.approx(0.5, abs=1e-15)
    ts = np.linspace(0.0, 10.0, 101)
    assert np.max(np.abs(sq(ts) - np.cos(ts) ** 2)) < 1e-14


def test_ratio_bounds_and_eval():
    ratio = TrigRatio(TrigPoly.constant(1.0), trig_k())
    ts = np.linspace(-30.0, 30.0, 3001)
    vals = ratio(ts)
    assert np.allclose(vals, 1.0 / trig_k()(ts))
    assert ratio.lower_bound() <= vals.min()
    assert vals.max() <= ratio.upper_bound()
    assert ratio.bounds() == (1.0 / 2.5, 1.0 / 1.5)
    with pytest.raises(ValueError):
        TrigRatio(TrigPoly.constant(1.0), TrigPoly.constant(-1.0))


def test_serialization_roundtrip():
    p = trig_k() * trig_b()
    assert TrigPoly.from_dict(p.to_dict()) == TrigPoly(
        p.const, tuple(Harmonic(float(h.amplitude), float(h.frequency),
                                float(h.phase), h.kind) for h in p.harmonics))
    r = TrigRatio(trig_b(), trig_k())
    assert TrigRatio.from_dict(r.to_dict()) == r


def test_harmonic_validation():
    with pytest.raises(ValueError):
        Harmonic(1.0, -1.0)
    with pytest.raises(ValueError):
        Harmonic(1.0, 1.0, 0.0, "tan")
