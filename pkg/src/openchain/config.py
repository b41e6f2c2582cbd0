"""JSON run configuration.

Complex scalars are ``[re, im]`` (plain numbers are accepted too).  Each
boundary is an object with exactly one key, ``"general"`` (four values
alpha, beta, gamma, delta) or ``"triangular"`` (three values a, b, c)::

    {
      "eta": [1, 0], "L": 2, "xi": [[0, 0], [0, 0]],
      "right": {"general": [[1, 0], [0.5, 0], [0.3, 0], [0.2, 0]]},
      "left": {"triangular": [[2, 0], [1, 0], [1, 0]]},
      "N_range": [0, 2], "seed": 7,
      "tolerances": {"eigenpair": 1e-8},
      "solver": {"starts": 100, "newton_tol": 1e-11, "max_iter": 100},
      "output": "run.json"
    }
"""
from __future__ import annotations

import json
import os
from dataclasses import dataclass, field

from .errors import InputError
from .kernels import GeneralBoundary, ModelParams, TriangularBoundary
from .reports import decode_complex

SEED_ENV = "OPENCHAIN_SEED"
MAX_SEED = 2**64 - 1

_KNOWN_KEYS = {"eta", "L", "xi", "right", "left", "N", "N_range", "seed", "tolerances", "solver", "output", "u",
               "lengths", "draws", "fixtures"}


@dataclass
class RunConfig:
    eta: complex = 1.0
    L: int = 2
    xi: tuple = ()
    right: GeneralBoundary | TriangularBoundary | None = None
    left: GeneralBoundary | TriangularBoundary | None = None
    N_values: tuple | None = None
    seed: int = 0
    tolerances: dict = field(default_factory=dict)
    solver: dict = field(default_factory=dict)
    output: str | None = None
    u: tuple = ()
    lengths: tuple | None = None
    draws: int | None = None
    fixtures: tuple = ()

    @property
    def params(self) -> ModelParams:
        return ModelParams(self.eta, self.L, self.xi)


def _complex(value, what):
    try:
        return decode_complex(value)
    except (ValueError, TypeError) as exc:
        raise InputError(f"{what}: {exc}") from None


def parse_boundary(obj, what) -> GeneralBoundary | TriangularBoundary:
    if not isinstance(obj, dict) or len(obj) != 1:
        raise InputError(f"{what}: expected an object with exactly one of 'general' or 'triangular'")
    (tag, vals), = obj.items()
    sizes = {"general": 4, "triangular": 3}
    if tag not in sizes:
        raise InputError(f"{what}: unknown boundary tag {tag!r}")
    if not isinstance(vals, list) or len(vals) != sizes[tag]:
        raise InputError(f"{what}: '{tag}' needs {sizes[tag]} values")
    nums = [_complex(v, f"{what}.{tag}[{i}]") for i, v in enumerate(vals)]
    return GeneralBoundary(*nums) if tag == "general" else TriangularBoundary(*nums)


def _seed(value, what):
    if isinstance(value, bool) or not isinstance(value, int) or not 0 <= value <= MAX_SEED:
        raise InputError(f"{what}: seed must be an integer in [0, 2^64)")
    return value


def parse_config(data: dict, env=None) -> RunConfig:
    """Validate a decoded JSON object; ``OPENCHAIN_SEED`` in ``env`` overrides ``seed``."""
    if not isinstance(data, dict):
        raise InputError("configuration must be a JSON object")
    unknown = set(data) - _KNOWN_KEYS
    if unknown:
        raise InputError(f"unknown configuration keys: {sorted(unknown)}")
    cfg = RunConfig()
    if "eta" in data:
        cfg.eta = _complex(data["eta"], "eta")
    if "L" in data:
        if isinstance(data["L"], bool) or not isinstance(data["L"], int) or data["L"] < 1:
            raise InputError("L must be a positive integer")
        cfg.L = data["L"]
    if "xi" in data:
        if not isinstance(data["xi"], list):
            raise InputError("xi must be a list")
        cfg.xi = tuple(_complex(x, f"xi[{i}]") for i, x in enumerate(data["xi"]))
        if len(cfg.xi) != cfg.L:
            raise InputError(f"xi has {len(cfg.xi)} entries but L = {cfg.L}")
    if "right" in data:
        cfg.right = parse_boundary(data["right"], "right")
    if "left" in data:
        cfg.left = parse_boundary(data["left"], "left")
    if "N" in data and "N_range" in data:
        raise InputError("give either N or N_range, not both")
    if "N" in data:
        n = data["N"]
        if isinstance(n, bool) or not isinstance(n, int) or n < 0:
            raise InputError("N must be a nonnegative integer")
        cfg.N_values = (n,)
    if "N_range" in data:
        r = data["N_range"]
        if (not isinstance(r, list) or len(r) != 2 or not all(isinstance(x, int) and not isinstance(x, bool) for x in r)
                or r[0] < 0 or r[1] < r[0]):
            raise InputError("N_range must be [lo, hi] with 0 <= lo <= hi")
        cfg.N_values = tuple(range(r[0], r[1] + 1))
    if "seed" in data:
        cfg.seed = _seed(data["seed"], "seed")
    for key in ("tolerances", "solver"):
        if key in data:
            if not isinstance(data[key], dict):
                raise InputError(f"{key} must be an object")
            setattr(cfg, key, dict(data[key]))
    for name, val in cfg.tolerances.items():
        if isinstance(val, bool) or not isinstance(val, (int, float)) or val <= 0:
            raise InputError(f"tolerance {name!r} must be a positive number")
    allowed_solver = {"starts", "newton_tol", "max_iter"}
    if set(cfg.solver) - allowed_solver:
        raise InputError(f"solver accepts only {sorted(allowed_solver)}")
    if "output" in data:
        if not isinstance(data["output"], str):
            raise InputError("output must be a path string")
        cfg.output = data["output"]
    if "u" in data:
        if not isinstance(data["u"], list):
            raise InputError("u must be a list")
        cfg.u = tuple(_complex(x, f"u[{i}]") for i, x in enumerate(data["u"]))
    if "lengths" in data:
        ls = data["lengths"]
        if not isinstance(ls, list) or not all(isinstance(x, int) and not isinstance(x, bool) and x >= 1 for x in ls):
            raise InputError("lengths must be a list of positive integers")
        cfg.lengths = tuple(ls)
    if "draws" in data:
        if isinstance(data["draws"], bool) or not isinstance(data["draws"], int) or data["draws"] < 1:
            raise InputError("draws must be a positive integer")
        cfg.draws = data["draws"]
    if "fixtures" in data:
        if not isinstance(data["fixtures"], list) or not all(isinstance(x, str) for x in data["fixtures"]):
            raise InputError("fixtures must be a list of names")
        cfg.fixtures = tuple(data["fixtures"])
    env = os.environ if env is None else env
    if env.get(SEED_ENV):
        try:
            cfg.seed = _seed(int(env[SEED_ENV]), SEED_ENV)
        except ValueError:
            raise InputError(f"{SEED_ENV} must be an integer") from None
    cfg.params  # validates eta, L, xi together
    return cfg


def load_config(path, env=None) -> RunConfig:
    try:
        with open(path) as fh:
            data = json.load(fh)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from None
    except json.JSONDecodeError as exc:
        raise InputError(f"{path} is not valid JSON: {exc}") from None
    return parse_config(data, env)


def parse_tol(items) -> dict:
    """``["name=1e-9", ...]`` to a dict."""
    out = {}
    for item in items or ():
        name, sep, val = item.partition("=")
        if not sep or not name:
            raise InputError(f"--tol expects NAME=VALUE, got {item!r}")
        try:
            out[name] = float(val)
        except ValueError:
            raise InputError(f"--tol {name}: {val!r} is not a number") from None
        if not out[name] > 0:
            raise InputError(f"--tol {name} must be positive")
    return out
