"""Truncated Lyapunov exponents: analytic oracles and sign consistency."""

from __future__ import annotations

import math

import numpy as np
import pytest

from cubicbif import (CubicField, TrigPoly, branch_set, lyap_bounds,
                      truncated_exponent)
from cubicbif.branches import constant_branch
from cubicbif.errors import NumericsError

from conftest import FAST, FAST_AUTON, trig_b

S = 2.6
BBAR = 2.1


def _case3(b=None):
    return CubicField.with_threshold(c=TrigPoly.constant(S), b=b or trig_b(), s=S)


def _exponent_oracle(eps, ts, t0):
    """Analytic truncated exponent of the constant branch with the truncation
    origin at t0 (the branch's left end): the sinusoid integrates in closed
    form, (1/t) * integral over [t0, t0 + t]."""
    return -S * S + eps * (BBAR + 0.3 * (np.sin(t0 + ts) - np.sin(t0)) / ts)


def test_constant_branch_exponent_matches_analytic():
    f = _case3()
    branch = constant_branch(S, FAST)
    eps = 3.0
    for t in (10.0, 100.0, 400.0):
        ours = truncated_exponent(f, eps, branch, t)
        oracle = _exponent_oracle(eps, np.array([t]), branch.t_left)[0]
        assert ours == pytest.approx(oracle, abs=1e-10)


def test_lyap_bounds_match_analytic_minmax():
    f = _case3()
    branch = constant_branch(S, FAST)
    eps, T, tau = 3.0, 400.0, 40.0
    lb = lyap_bounds(f, eps, branch, T, tau)
    ts = np.arange(40, 401) * 1.0
    oracle = _exponent_oracle(eps, ts, branch.t_left)
    assert lb.gamma_lo == pytest.approx(oracle.min(), abs=1e-10)
    assert lb.gamma_hi == pytest.approx(oracle.max(), abs=1e-10)
    assert lb.sign == "negative"
    assert lb.origin == branch.t_left


def test_zero_branch_exponent_is_exactly_zero(eq42, eq42_sets):
    lower = eq42_sets[0.0].lower
    assert truncated_exponent(eq42, 0.0, lower, 200.0) == 0.0
    lb = lyap_bounds(eq42, 0.0, lower, 400.0, 40.0)
    assert lb.gamma_lo == lb.gamma_hi == 0.0
    assert lb.sign == "straddles_zero"


def test_constant_coefficient_surrogate_exponent():
    # constant b makes f_x along the invariant line constant: -s^2 + eps*b = 1
    f = CubicField.with_threshold(c=TrigPoly.constant(1.0),
                                  b=TrigPoly.constant(1.0), s=1.0)
    branch = constant_branch(1.0, FAST_AUTON)
    for t in (5.0, 50.0):
        assert truncated_exponent(f, 2.0, branch, t) == pytest.approx(1.0, abs=1e-12)


def test_width_decays_like_one_over_tau():
    f = _case3()
    num = FAST_AUTON.with_(t_run=2.0e3, t_eval=250.0)
    branch = constant_branch(S, num)
    eps = 3.0
    widths = [lyap_bounds(f, eps, branch, 1.0e5, tau).width
              for tau in (1.0e2, 1.0e3, 1.0e4)]
    assert widths[1] < 0.2 * widths[0]
    assert widths[2] < 0.2 * widths[1]


def test_sign_flip_across_transcritical_value():
    # s^2/mean(b) = 6.76/2.1; the constant branch flips from attractive
    # to repulsive across it
    f = _case3()
    num = FAST_AUTON
    branch = constant_branch(S, num)
    below = lyap_bounds(f, 3.0, branch, 1.0e3, 1.0e2)
    above = lyap_bounds(f, 3.5, branch, 1.0e3, 1.0e2)
    assert below.sign == "negative"
    assert above.sign == "positive"
    assert 3.0 < 6.76 / 2.1 < 3.5


def test_branch_sign_consistency_away_from_bifurcation(eq42_sets):
    bs = eq42_sets[0.1]
    assert bs.upper.lyap.sign == "negative"
    assert bs.lower.lyap.sign == "negative"
    assert bs.middle.lyap.sign == "positive"
    assert bs.upper.stability == "attractive"
    assert bs.middle.stability == "repulsive"


def test_repulsive_regeneration_beyond_window(eq42, eq42_sets):
    # T beyond the located window forces the backward re-seeding path
    m = eq42_sets[0.1].middle
    window_span = (m.samples.size - 1) * m.dt
    T = window_span + 500.0
    lb = lyap_bounds(eq42, 0.1, m, T, 50.0)
    assert lb.gamma_lo > 0.0
    # consistent with the cached-window value over the same tail
    lb_win = lyap_bounds(eq42, 0.1, m, window_span, 50.0)
    assert lb.gamma_lo == pytest.approx(lb_win.gamma_lo, rel=0.2)


def test_attractive_regeneration_beyond_window(eq42, eq42_sets):
    u = eq42_sets[0.1].upper
    window_span = (u.samples.size - 1) * u.dt
    lb = lyap_bounds(eq42, 0.1, u, window_span + 1000.0, 100.0)
    assert lb.sign == "negative"


def test_validation_errors(eq42, eq42_sets):
    u = eq42_sets[0.1].upper
    with pytest.raises(NumericsError):
        lyap_bounds(eq42, 0.1, u, 100.0, 100.0)  # tau >= T
    with pytest.raises(NumericsError):
        truncated_exponent(eq42, 0.1, u, -1.0)
