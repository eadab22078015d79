"""Global bifurcation diagrams for coercive cubic ODEs with quasiperiodic
coefficients: hyperbolic-branch location, truncated Lyapunov exponents,
bifurcation-value bisection, and a population model with Allee effect and
threshold-driven migration."""

from __future__ import annotations

__version__ = "0.1.0"

from .backend import active_backend
from .bifurcate import (BifurcationReport, ScanRow, autonomous_bifurcations,
                        bisect_bifurcation, has_three_branches, sweep,
                        transcritical_flip)
from .branches import (Branch, BranchSet, branch_set, first_crossing,
                       locate_attractive, locate_repulsive)
from .coeffs import Harmonic, TrigPoly, TrigRatio
from .config import ExperimentConfig, load_config, parse_config
from .field import (CubicField, RegimeClass, bracket_constants, classify_regime,
                    discriminant, eval_dfdx, eval_field, real_roots, x_plus)
from .integrate import Trajectory, order_check, rk4_generic, rk4_integrate
from .lyapunov import LyapBounds, lyap_bounds, truncated_exponent
from .params import DEFAULT_NUMERICS, REDUCED_NUMERICS, Numerics
from .popmodel import Outcome, PopScenario, critical_intensity, simulate_population

__all__ = [
    "__version__", "active_backend",
    "Harmonic", "TrigPoly", "TrigRatio",
    "CubicField", "RegimeClass", "eval_field", "eval_dfdx", "discriminant",
    "real_roots", "classify_regime", "bracket_constants", "x_plus",
    "Trajectory", "rk4_integrate", "rk4_generic", "order_check",
    "Numerics", "DEFAULT_NUMERICS", "REDUCED_NUMERICS",
    "Branch", "BranchSet", "locate_attractive", "locate_repulsive",
    "branch_set", "first_crossing",
    "LyapBounds", "truncated_exponent", "lyap_bounds",
    "ScanRow", "BifurcationReport", "has_three_branches", "bisect_bifurcation",
    "sweep", "autonomous_bifurcations", "transcritical_flip",
    "PopScenario", "Outcome", "simulate_population", "critical_intensity",
    "ExperimentConfig", "load_config", "parse_config",
]
