"""Experiment configuration: JSON schema, validation, round-trip serialization.

Exactly one of "field" and "population" defines the equation; "numerics" holds
the shared integration/location parameters, all optional and overridable by
CLI flags.  Coefficient schema: {"constant": c, "harmonics": [{"amp", "freq",
"phase", "kind"}]}.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, fields as dc_fields

from .coeffs import TrigPoly, TrigRatio
from .errors import ConfigError
from .field import CubicField
from .params import Numerics
from .popmodel import PopScenario

__all__ = ["ExperimentConfig", "load_config", "parse_config"]

_NUMERIC_KEYS = tuple(f.name for f in dc_fields(Numerics))


def _coeff_from(obj, what: str):
    try:
        if isinstance(obj, (int, float)):
            return TrigPoly.constant(float(obj))
        if isinstance(obj, dict) and "num" in obj:
            return TrigRatio.from_dict(obj)
        if isinstance(obj, dict):
            return TrigPoly.from_dict(obj)
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"bad coefficient {what!r}: {exc}") from exc
    raise ConfigError(f"bad coefficient {what!r}: expected number or object")


def _coeff_to(coeff) -> dict:
    return coeff.to_dict()


@dataclass(frozen=True)
class ExperimentConfig:
    field: CubicField | None
    scenario: PopScenario | None
    numerics: Numerics

    @property
    def any_field(self) -> CubicField:
        return self.field if self.field is not None else self.scenario.to_field()

    def to_dict(self) -> dict:
        num = {k: getattr(self.numerics, k) for k in _NUMERIC_KEYS}
        if self.scenario is not None:
            sc = self.scenario
            body = {"population": {
                "r": _coeff_to(sc.r), "k": _coeff_to(sc.k), "b": _coeff_to(sc.b),
                "s": sc.s, "eps": sc.eps, "x0": sc.x0, "horizon": sc.horizon}}
        else:
            f = self.field
            body = {"field": {"c": _coeff_to(f.c), "b": _coeff_to(f.b)}}
            if f.ratio_s is not None:
                body["field"]["ratio_s"] = f.ratio_s
            else:
                body["field"]["a"] = _coeff_to(f.a)
            body["field"]["scale"] = _coeff_to(f.scale)
        body["numerics"] = num
        return body

    def dumps(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)


def parse_config(data: dict) -> ExperimentConfig:
    if not isinstance(data, dict):
        raise ConfigError("config must be a JSON object")
    has_field = "field" in data
    has_pop = "population" in data
    if has_field == has_pop:
        raise ConfigError("config needs exactly one of 'field' or 'population'")
    num_kwargs = {}
    for key, value in (data.get("numerics") or {}).items():
        if key not in _NUMERIC_KEYS:
            raise ConfigError(f"unknown numerics key {key!r}")
        num_kwargs[key] = float(value)
    try:
        numerics = Numerics(**num_kwargs)
    except Exception as exc:
        raise ConfigError(f"bad numerics: {exc}") from exc

    if has_field:
        spec = data["field"]
        if not isinstance(spec, dict) or "c" not in spec or "b" not in spec:
            raise ConfigError("'field' needs at least 'c' and 'b'")
        c = _coeff_from(spec["c"], "c")
        b = _coeff_from(spec["b"], "b")
        scale = _coeff_from(spec["scale"], "scale") if "scale" in spec else TrigPoly.constant(1.0)
        try:
            if "ratio_s" in spec:
                if "a" in spec:
                    raise ConfigError("'a' and 'ratio_s' are mutually exclusive")
                field = CubicField.with_threshold(c, b, float(spec["ratio_s"]), scale)
            elif "a" in spec:
                field = CubicField(c, b, _coeff_from(spec["a"], "a"), scale)
            else:
                raise ConfigError("'field' needs 'a' or 'ratio_s'")
        except ConfigError:
            raise
        except Exception as exc:
            raise ConfigError(f"bad field: {exc}") from exc
        return ExperimentConfig(field=field, scenario=None, numerics=numerics)

    spec = data["population"]
    if not isinstance(spec, dict):
        raise ConfigError("'population' must be an object")
    try:
        scenario = PopScenario(
            r=_coeff_from(spec.get("r", 1.0), "r"),
            k=_coeff_from(spec["k"], "k"),
            b=_coeff_from(spec["b"], "b"),
            s=float(spec["s"]),
            eps=float(spec.get("eps", 0.0)),
            x0=float(spec.get("x0", 1.0)),
            horizon=float(spec.get("horizon", 2.0e4)))
    except ConfigError:
        raise
    except KeyError as exc:
        raise ConfigError(f"population config missing {exc}") from exc
    except Exception as exc:
        raise ConfigError(f"bad population config: {exc}") from exc
    return ExperimentConfig(field=None, scenario=scenario, numerics=numerics)


def load_config(path) -> ExperimentConfig:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config {path} is not valid JSON: {exc}") from exc
    return parse_config(data)
