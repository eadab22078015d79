"""Compare the numba and pure-numpy integration backends.

Usage: python benchmarks/bench_kernels.py [--units 500]

Runs the same forward pass (the worked example's field, eps = 0.1, four
simultaneous states with window recording and exponent accumulation) through
both backends and reports steps/second and the final-state agreement.
"""

from __future__ import annotations

import argparse
import math
import time

import numpy as np

from cubicbif import CubicField, Harmonic, TrigPoly, TrigRatio
from cubicbif.integrate import drive_states


def example_field() -> CubicField:
    k = TrigPoly(2.0, (Harmonic(0.5, math.sqrt(3.0), 0.0, "sin"),))
    b = TrigPoly(2.1, (Harmonic(0.3, 1.0, 0.0, "cos"),))
    return CubicField.with_threshold(c=k, b=k * b, s=2.6,
                                     scale=TrigRatio(TrigPoly.constant(1.0), k))


def run(backend: str, units: float, h: float) -> tuple[float, np.ndarray]:
    field = example_field()
    x0s = [3.0, 4.0, -1.0, -2.0]
    n_rec = int(units) + 1
    # warm-up (jit compilation for the numba path)
    drive_states(field, 0.1, 0.0, x0s, 2.0, h=h, which_backend=backend)
    t0 = time.perf_counter()
    out = drive_states(field, 0.1, 0.0, x0s, units, h=h,
                       record=(0.0, 1.0, n_rec), accumulate=(0.0, 1.0, n_rec - 1),
                       which_backend=backend)
    return time.perf_counter() - t0, out.finals


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--units", type=float, default=500.0,
                        help="integration span in time units (default 500)")
    parser.add_argument("--h", type=float, default=2.0 ** -10)
    args = parser.parse_args()
    steps = 4 * args.units / args.h
    results = {}
    for backend in ("numba", "numpy"):
        try:
            elapsed, finals = run(backend, args.units, args.h)
        except ImportError as exc:
            print(f"{backend:>6}: unavailable ({exc})")
            continue
        results[backend] = finals
        print(f"{backend:>6}: {elapsed:8.3f} s   "
              f"{steps / elapsed / 1e6:8.2f} M trajectory-steps/s")
    if len(results) == 2:
        diff = float(np.max(np.abs(results["numba"] - results["numpy"])))
        print(f"final-state agreement: max |numba - numpy| = {diff:.3e}")


if __name__ == "__main__":
    main()
