"""Run configuration: parsing, validation, JSON round trip, model/loop builders."""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, fields, replace

import numpy as np

from .errors import ValidationError
from .holonomy import ESTIMATORS, SOURCES
from .loops import ParameterLoop
from .models import BosonModel, FermionModel, Model, OneDimModel, SpinModel, UnitaryFamily

MODEL_KINDS = ("boson", "fermion", "spin", "unitary_family", "one_dim")
COMMANDS = ("berry", "uhlmann", "correspondence", "purify-check", "selftest")
DEFAULT_LOOPS = {
    "boson": "circle:0+0i,0.5,+1",
    "fermion": "circle:0+0i,0.5,+1",
    "spin": "equator",
    "unitary_family": "circle:0+0i,0.5,+1",
    "one_dim": "latitude:1.0471975511965976,1",
}


def parse_complex(text: str) -> complex:
    """'0+0i', '1-2j', '0.5' -> complex."""
    s = text.strip().replace(" ", "").replace("i", "j")
    try:
        return complex(s)
    except ValueError:
        raise ValidationError(f"not a complex number: {text!r}") from None


def _float(text: str, what: str) -> float:
    try:
        return float(text)
    except ValueError:
        raise ValidationError(f"{what}: not a number: {text!r}") from None


def _int(text: str, what: str) -> int:
    try:
        return int(text)
    except ValueError:
        raise ValidationError(f"{what}: not an integer: {text!r}") from None


def parse_loop(spec: str, K: int = 2048) -> ParameterLoop:
    """circle:<c>,<r>,<w> | polygon:<z1;z2;...> | latitude:<theta0>,<w> |
    equator[:<w>] | longitude:<phi0>[,<w>]"""
    kind, _, rest = spec.strip().partition(":")
    args = rest.split(",") if rest else []
    if kind == "circle":
        if len(args) != 3:
            raise ValidationError(f"circle needs center,radius,winding: {spec!r}")
        return ParameterLoop.circle(parse_complex(args[0]), _float(args[1], "radius"), _int(args[2], "winding"), K)
    if kind == "polygon":
        verts = [parse_complex(v) for v in rest.split(";") if v.strip()]
        return ParameterLoop.polygon(verts, K)
    if kind == "latitude":
        if len(args) not in (1, 2):
            raise ValidationError(f"latitude needs theta0[,winding]: {spec!r}")
        w = _int(args[1], "winding") if len(args) == 2 else 1
        return ParameterLoop.latitude(_float(args[0], "theta0"), w, K)
    if kind == "equator":
        return ParameterLoop.equator(_int(args[0], "winding") if args else 1, K)
    if kind == "longitude":
        if len(args) not in (1, 2):
            raise ValidationError(f"longitude needs phi0[,winding]: {spec!r}")
        w = _int(args[1], "winding") if len(args) == 2 else 1
        return ParameterLoop.longitude(_float(args[0], "phi0"), w, K)
    raise ValidationError(f"unknown loop spec {spec!r}")


def parse_beta_range(spec: str) -> tuple[float, ...]:
    """'a:b:logN' (geometric) or 'a:b:N' (linear), both ends included."""
    parts = spec.split(":")
    if len(parts) != 3:
        raise ValidationError(f"beta range must be a:b:N or a:b:logN, got {spec!r}")
    lo, hi = _float(parts[0], "beta range"), _float(parts[1], "beta range")
    count = parts[2]
    if count.startswith("log"):
        n = _int(count[3:], "beta range")
        if lo <= 0:
            raise ValidationError("log-spaced beta range needs a positive start")
        values = np.geomspace(lo, hi, n)
    else:
        values = np.linspace(lo, hi, _int(count, "beta range"))
    return tuple(float(v) for v in values)


@dataclass(frozen=True)
class RunConfig:
    command: str = "uhlmann"
    model: str = "boson"
    omega: float = 1.0
    omega0: float = 1.0
    j: float = 1.0
    n_cut: int = 48
    dim: int = 2
    gap: float = 1.0
    seed: int = 0
    loop: str | None = None
    betas: tuple = (1.0,)
    K: int = 2048
    estimator: str = "connection_product"
    source: str = "analytic"
    level: int = 0
    output: str | None = None
    check: bool = False

    def __post_init__(self):
        object.__setattr__(self, "betas", tuple(float(b) for b in self.betas))

    @property
    def loop_spec(self) -> str:
        return self.loop or DEFAULT_LOOPS[self.model]

    def validate(self) -> RunConfig:
        if self.command not in COMMANDS:
            raise ValidationError(f"unknown command {self.command!r}")
        if self.model not in MODEL_KINDS:
            raise ValidationError(f"unknown model {self.model!r}; use one of {MODEL_KINDS}")
        for name in ("omega", "omega0", "j", "gap"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v > 0):
                raise ValidationError(f"{name} must be positive, got {v}")
        for name in ("n_cut", "dim", "K"):
            if getattr(self, name) < 1:
                raise ValidationError(f"{name} must be positive")
        if not self.betas:
            raise ValidationError("need at least one beta")
        if any(not (math.isfinite(b) and b > 0) for b in self.betas):
            raise ValidationError("beta values must be positive and finite")
        if any(b2 <= b1 for b1, b2 in zip(self.betas, self.betas[1:])):
            raise ValidationError("beta list must be strictly ascending")
        if self.estimator not in ESTIMATORS:
            raise ValidationError(f"unknown estimator {self.estimator!r}")
        if self.source not in SOURCES:
            raise ValidationError(f"unknown source {self.source!r}")
        if self.level < 0:
            raise ValidationError("level must be non-negative")
        self.build_loop()
        return self

    # builders -------------------------------------------------------------
    def build_loop(self) -> ParameterLoop:
        return parse_loop(self.loop_spec, self.K)

    def build_model(self, beta: float | None = None) -> Model:
        b = self.betas[0] if beta is None else float(beta)
        if self.model == "boson":
            return BosonModel(omega=self.omega, n_cut=self.n_cut, beta=b)
        if self.model == "fermion":
            return FermionModel(omega=self.omega, beta=b)
        if self.model == "spin":
            return SpinModel(j=self.j, omega0=self.omega0, beta=b)
        if self.model == "unitary_family":
            return UnitaryFamily.random(dim=self.dim, gap=self.gap, beta=b, seed=self.seed)
        return OneDimModel(parent=SpinModel(j=0.5, omega0=self.omega0), beta=b)

    # serialisation ----------------------------------------------------------
    def to_dict(self) -> dict:
        d = asdict(self)
        d["betas"] = list(self.betas)
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"

    @classmethod
    def from_dict(cls, data: dict) -> RunConfig:
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ValidationError(f"unknown config keys: {sorted(unknown)}")
        return cls(**data)

    @classmethod
    def from_json(cls, text: str) -> RunConfig:
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ValidationError(f"config is not valid JSON: {exc}") from None
        if not isinstance(data, dict):
            raise ValidationError("config must be a JSON object")
        return cls.from_dict(data)

    def merged(self, overrides: dict) -> RunConfig:
        """Copy with every non-None override applied."""
        return replace(self, **{k: v for k, v in overrides.items() if v is not None})
