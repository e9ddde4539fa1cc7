"""File formats and the compact generator grammar used by the command line."""
from __future__ import annotations

import configparser
import json
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from .angles import (
    ThetaVector,
    random_symmetric_theta,
    theta_eckart,
    theta_interaction,
    theta_interaction_3d,
)


def write_theta(path, theta: ThetaVector) -> None:
    Path(path).write_text("".join(f"{v!r}\n" for v in theta.values.tolist()))


def read_theta(path) -> ThetaVector:
    values = np.loadtxt(path, dtype=float, delimiter=",", ndmin=1)
    return ThetaVector.from_values(values.reshape(-1))


def _random(m: int, seed: int = 0, symmetric: int = 1, scale: float = np.pi) -> ThetaVector:
    rng = np.random.default_rng(seed)
    if symmetric:
        return random_symmetric_theta(m, rng, scale)
    return ThetaVector(m, rng.uniform(-scale, scale, 2**m))


GENERATORS = {
    "eckart": (theta_eckart, {"n": int, "L": float, "A": float, "a": float, "dt": float}),
    "interaction": (theta_interaction, {"n": int, "L": float, "lambda2": float, "dt": float}),
    "interaction3d": (theta_interaction_3d, {"n": int, "L": float, "lambda2": float, "dt": float}),
    "random": (_random, {"m": int, "seed": int, "symmetric": int, "scale": float}),
}

GENERATOR_HELP = (
    "generator specs: name:key=value,...  with "
    + "; ".join(f"{name}({', '.join(keys)})" for name, (_, keys) in GENERATORS.items())
)


def parse_generator(spec: str) -> tuple[str, dict]:
    """``"interaction:n=2,L=30,lambda2=0.6,dt=0.1"`` -> ``("interaction", {...})``."""
    name, _, rest = spec.partition(":")
    if name not in GENERATORS:
        raise ValueError(f"unknown generator {name!r}; {GENERATOR_HELP}")
    types = GENERATORS[name][1]
    params = {}
    for item in filter(None, rest.split(",")):
        key, sep, value = item.partition("=")
        key = key.strip()
        if not sep or key not in types:
            raise ValueError(f"bad parameter {item!r} for generator {name!r}")
        try:
            params[key] = types[key](value)
        except ValueError:
            raise ValueError(f"cannot read {key}={value!r}") from None
    return name, params


def generate_theta(spec: str) -> ThetaVector:
    name, params = parse_generator(spec)
    try:
        return GENERATORS[name][0](**params)
    except TypeError as exc:
        raise ValueError(f"generator {name!r}: {exc}") from None


def theta_from_config(path) -> ThetaVector:
    """``generator = name`` plus one ``key = value`` line per parameter."""
    params = read_config(path)
    name = params.pop("generator", None)
    if name is None:
        raise ValueError(f"{path}: no 'generator' entry")
    return generate_theta(name + ":" + ",".join(f"{k}={v}" for k, v in params.items()))


def load_theta(source: str) -> ThetaVector:
    """A CSV or generator-config path if one exists, otherwise a generator spec."""
    path = Path(source)
    if path.is_file():
        if path.read_text().lstrip().startswith(("generator", "#")):
            return theta_from_config(path)
        return read_theta(path)
    return generate_theta(source)


def read_config(path) -> dict[str, str]:
    """``key = value`` lines (``#`` comments allowed), no section header needed."""
    parser = configparser.ConfigParser(inline_comment_prefixes=("#",))
    parser.optionxform = str
    parser.read_string("[run]\n" + Path(path).read_text())
    return dict(parser["run"])


@dataclass
class RunConfig:
    command: str
    inputs: dict = field(default_factory=dict)
    outputs: dict = field(default_factory=dict)
    parameters: dict = field(default_factory=dict)
    seed: int | None = None
    tolerances: dict = field(default_factory=dict)

    def dumps(self) -> str:
        return json.dumps(asdict(self), indent=2, sort_keys=True) + "\n"

    def write(self, path) -> None:
        Path(path).write_text(self.dumps())
