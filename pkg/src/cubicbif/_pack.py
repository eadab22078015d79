"""Flatten a CubicField into the array form the integration kernels consume.

Coefficient roles are rational pairs (numerator, denominator); trivial
denominators pack as the constant 1 with no terms, and x/1.0 == x keeps them
free.  Harmonics are deduplicated into a shared oscillator table so that
coefficients built from the same underlying sinusoids (the population model's
k appears in c, b and the scale) cost one oscillator, not three.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .coeffs import TrigPoly, TrigRatio

__all__ = ["FieldPack", "pack_field"]

_ONE = TrigPoly.constant(1.0)


@dataclass(frozen=True)
class FieldPack:
    osc_freq: np.ndarray   # float64[n_osc]
    osc_phase: np.ndarray  # float64[n_osc]
    osc_iscos: np.ndarray  # bool[n_osc]
    consts: np.ndarray     # float64[8]: cn cd bn bd an ad sn sd
    term_amp: np.ndarray   # float64[n_terms]
    term_osc: np.ndarray   # int64[n_terms]
    role_off: np.ndarray   # int64[9]
    ratio_s: float         # nan when a is independent of b


def _split(coeff) -> tuple[TrigPoly, TrigPoly]:
    if isinstance(coeff, TrigRatio):
        return coeff.num, coeff.den
    return coeff, _ONE


def pack_field(field) -> FieldPack:
    ratio_s = field.ratio_s if field.ratio_s is not None else float("nan")
    cn, cd = _split(field.c)
    bn, bd = _split(field.b)
    an, ad = _split(field.a)
    sn, sd = _split(field.scale)
    if field.ratio_s is not None:
        # kernel evaluates a as -s * b; a's packed roles stay empty
        an, ad = TrigPoly(0.0), _ONE
    roles = (cn, cd, bn, bd, an, ad, sn, sd)

    osc_key: dict[tuple[float, float, str], int] = {}
    freqs: list[float] = []
    phases: list[float] = []
    iscos: list[bool] = []
    amps: list[float] = []
    oscs: list[int] = []
    offs = [0]
    consts = []
    for poly in roles:
        consts.append(poly.const)
        for h in poly.harmonics:
            key = (h.frequency, h.phase, h.kind)
            idx = osc_key.get(key)
            if idx is None:
                idx = len(freqs)
                osc_key[key] = idx
                freqs.append(h.frequency)
                phases.append(h.phase)
                iscos.append(h.kind == "cos")
            amps.append(h.amplitude)
            oscs.append(idx)
        offs.append(len(amps))

    return FieldPack(
        osc_freq=np.asarray(freqs, dtype=np.float64),
        osc_phase=np.asarray(phases, dtype=np.float64),
        osc_iscos=np.asarray(iscos, dtype=np.bool_),
        consts=np.asarray(consts, dtype=np.float64),
        term_amp=np.asarray(amps, dtype=np.float64),
        term_osc=np.asarray(oscs, dtype=np.int64),
        role_off=np.asarray(offs, dtype=np.int64),
        ratio_s=ratio_s,
    )
