"""JSON model configs: decimal literals are read as exact fractions."""
from __future__ import annotations

import json
from fractions import Fraction
from importlib import resources
from pathlib import Path

from .errors import InvalidModel
from .fermi import FermiSpec
from .model import ModelSpec

_KEYS = {"nu", "c0", "c1", "c2", "c3_0", "c3", "beta_L", "beta_R", "beta_S", "fermi"}
FIXTURES = ("xy", "suzuki2", "fullrange1", "ising", "case6")


class ConfigError(ValueError):
    """The config file could not be read or does not describe a valid model."""


def model_from_dict(d: dict) -> ModelSpec:
    if not isinstance(d, dict):
        raise ConfigError("config must be a JSON object")
    extra = set(d) - _KEYS
    if extra:
        raise ConfigError(f"unknown keys: {sorted(extra)}")
    if "nu" not in d:
        raise ConfigError("missing 'nu'")
    try:
        fermi = FermiSpec.from_json(d.get("fermi"))
        return ModelSpec(
            nu=d["nu"],
            c0=d.get("c0"), c1=d.get("c1"), c2=d.get("c2"),
            c3_0=d.get("c3_0", 0), c3=d.get("c3"),
            beta_L=d.get("beta_L", 1), beta_R=d.get("beta_R", 1),
            beta_S=d.get("beta_S"), fermi=fermi,
        )
    except (InvalidModel, ValueError, TypeError) as exc:
        raise ConfigError(str(exc)) from exc


def _num(x: Fraction):
    if x.denominator == 1:
        return int(x)
    f = float(x)
    return f if Fraction(repr(f)) == x else str(x)


def model_to_dict(m: ModelSpec) -> dict:
    d = {"nu": m.nu}
    for name in ("c0", "c1", "c2"):
        d[name] = [_num(c) for c in getattr(m, name)]
    d["c3_0"] = _num(m.c3_0)
    d["c3"] = [_num(c) for c in m.c3]
    d["beta_L"], d["beta_R"] = m.beta_L, m.beta_R
    if m.beta_S is not None:
        d["beta_S"] = m.beta_S
    d["fermi"] = m.fermi.to_json()
    return d


def loads_model(text: str) -> ModelSpec:
    try:
        d = json.loads(text, parse_float=Fraction)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"invalid JSON: {exc}") from exc
    return model_from_dict(d)


def load_model(path) -> ModelSpec:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc.strerror}") from exc
    return loads_model(text)


def fixture(name: str) -> ModelSpec:
    """One of the shipped example models."""
    text = resources.files("chainflux").joinpath("fixtures", f"{name}.json").read_text()
    return loads_model(text)
