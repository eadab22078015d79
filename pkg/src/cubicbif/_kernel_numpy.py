"""Pure-numpy fallback for the RK4 driver.

Coefficient values are precomputed per chunk on the half-step grid with
vectorized trig (no rotation recurrence here: this path doubles as an
independent accuracy check of the numba kernel), then the stepping loop runs
in plain Python.  Semantics match `_kernel_numba.drive` node for node.
"""

from __future__ import annotations

import numpy as np

__all__ = ["drive"]

_CHUNK = 8192  # steps per precomputed block


def _role_values(consts, amp, oscidx, off, ratio_s, val):
    """Role values on a node grid; val has shape (n_osc, n_nodes)."""
    n_nodes = val.shape[1]

    def role(j):
        lo, hi = off[j], off[j + 1]
        out = np.full(n_nodes, consts[j])
        if hi > lo:
            out += amp[lo:hi] @ val[oscidx[lo:hi], :]
        return out

    vc = role(0) / role(1)
    vb = role(2) / role(3)
    if ratio_s == ratio_s:
        va = -ratio_s * vb
    else:
        va = role(4) / role(5)
    vsc = role(6) / role(7)
    return vc, vb, va, vsc


def drive(osc_freq, osc_phase, osc_iscos,
          consts, term_amp, term_osc, role_off, ratio_s,
          eps, t0, h, n_steps, X,
          rec_start, rec_stride, samples,
          acc_start, acc_cell, cells,
          x_max, stop_below, resync_every,
          status, event_step, event_xprev, event_x):
    m = X.size
    n_rec = samples.shape[1]
    n_cells = cells.shape[1]
    acc_end = acc_start + n_cells * acc_cell
    have_stop = stop_below == stop_below

    def chunk_values(base):
        span = min(_CHUNK, n_steps - base)
        idx = np.arange(2 * span + 1, dtype=np.float64)
        ts = t0 + (base + 0.5 * idx) * h
        theta = osc_freq[:, None] * ts[None, :] + osc_phase[:, None]
        val = np.where(osc_iscos[:, None], np.cos(theta), np.sin(theta))
        return _role_values(consts, term_amp, term_osc, role_off, ratio_s, val)

    base = 0
    vc, vb, va, vsc = chunk_values(0)
    k = 0
    alive = int(np.count_nonzero(status == 0))
    with np.errstate(over="ignore", invalid="ignore"):
        while True:
            if k - base >= _CHUNK:
                base = k
                vc, vb, va, vsc = chunk_values(base)
            n0 = 2 * (k - base)
            if n_rec > 0 and k >= rec_start and (k - rec_start) % rec_stride == 0:
                j = (k - rec_start) // rec_stride
                if j < n_rec:
                    for q in range(m):
                        if status[q] == 0:
                            samples[q, j] = X[q]
            if n_cells > 0 and acc_start <= k <= acc_end:
                dk = k - acc_start
                pos = dk % acc_cell
                cell = dk // acc_cell
                for q in range(m):
                    if status[q] == 0:
                        x = X[q]
                        fx = vsc[n0] * (-3.0 * x * x + 2.0 * vc[n0] * x + eps * vb[n0])
                        if pos == 0:
                            if cell > 0:
                                cells[q, cell - 1] += fx
                            if cell < n_cells:
                                cells[q, cell] += fx
                        elif pos % 2 == 1:
                            cells[q, cell] += 4.0 * fx
                        else:
                            cells[q, cell] += 2.0 * fx
            if k == n_steps or alive == 0:
                break
            nm, n1 = n0 + 1, n0 + 2
            for q in range(m):
                if status[q] != 0:
                    continue
                x = X[q]
                k1 = vsc[n0] * (-x**3 + vc[n0] * x * x + eps * (vb[n0] * x + va[n0]))
                xm = x + 0.5 * h * k1
                k2 = vsc[nm] * (-xm**3 + vc[nm] * xm * xm + eps * (vb[nm] * xm + va[nm]))
                xm = x + 0.5 * h * k2
                k3 = vsc[nm] * (-xm**3 + vc[nm] * xm * xm + eps * (vb[nm] * xm + va[nm]))
                xm = x + h * k3
                k4 = vsc[n1] * (-xm**3 + vc[n1] * xm * xm + eps * (vb[n1] * xm + va[n1]))
                xn = x + (h / 6.0) * (k1 + 2.0 * (k2 + k3) + k4)
                if not np.isfinite(xn) or abs(xn) >= x_max:
                    status[q] = 1
                    event_step[q] = k + 1
                    event_xprev[q] = x
                    event_x[q] = xn
                    alive -= 1
                elif have_stop and xn < stop_below:
                    status[q] = 2
                    event_step[q] = k + 1
                    event_xprev[q] = x
                    event_x[q] = xn
                    alive -= 1
                X[q] = xn
            k += 1
    return k
