"""Scenario and filter configurations: strict, versioned, JSON-backed.

A configuration document fully determines a run; unknown keys are errors
so that a typo in a physics parameter cannot silently fall back to a
default. Complex numbers are written as two-element [re, im] arrays.
"""

import json
import math
from dataclasses import dataclass, field, replace

from .errors import ConfigError
from .grid import GridSpec
from .potentials import (
    DEFAULT_CONSTANTS,
    FreeSpace,
    PhysicalConstants,
    Potential,
    PtTanhGaussian,
    QuadraticLinear,
    hermitian_variant,
)

__all__ = [
    "SCHEMA_VERSION",
    "InitialBeam",
    "GaussianSettings",
    "GridSettings",
    "ScenarioConfig",
    "FilterConfig",
    "load_scenario",
    "load_filter",
]

SCHEMA_VERSION = 1

PROPAGATORS = ("gaussian", "grid", "oracle")

_POTENTIAL_FIELDS = {
    "pt_tanh_gaussian": ("gamma", "omega", "eta"),
    "quadratic_linear": ("omega", "gamma"),
    "free_space": (),
}


def _check_keys(d: dict, allowed, required, where: str):
    if not isinstance(d, dict):
        raise ConfigError(f"{where} must be an object, got {type(d).__name__}")
    unknown = set(d) - set(allowed)
    if unknown:
        raise ConfigError(f"unknown keys in {where}: {sorted(unknown)}")
    missing = set(required) - set(d)
    if missing:
        raise ConfigError(f"missing keys in {where}: {sorted(missing)}")


def _number(d: dict, key: str, where: str) -> float:
    v = d[key]
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise ConfigError(f"{where}.{key} must be a number, got {v!r}")
    if not math.isfinite(v):
        raise ConfigError(f"{where}.{key} must be finite, got {v!r}")
    return float(v)


def _complex_pair(v, where: str) -> complex:
    if (
        not isinstance(v, (list, tuple))
        or len(v) != 2
        or any(isinstance(c, bool) or not isinstance(c, (int, float)) for c in v)
    ):
        raise ConfigError(f"{where} must be a two-element [re, im] array, got {v!r}")
    return complex(float(v[0]), float(v[1]))


def _validate_potential(spec: dict) -> dict:
    if not isinstance(spec, dict) or "kind" not in spec:
        raise ConfigError("potential must be an object with a 'kind' key")
    kind = spec["kind"]
    if kind not in _POTENTIAL_FIELDS:
        raise ConfigError(
            f"unknown potential kind {kind!r}; expected one of {sorted(_POTENTIAL_FIELDS)}"
        )
    fields = _POTENTIAL_FIELDS[kind]
    _check_keys(spec, ("kind", "hermitian", *fields), ("kind", *fields), "potential")
    out = {"kind": kind}
    for name in fields:
        out[name] = _number(spec, name, "potential")
    out["hermitian"] = bool(spec.get("hermitian", False))
    return out


def build_potential(spec: dict) -> Potential:
    spec = _validate_potential(spec)
    kind = spec["kind"]
    if kind == "pt_tanh_gaussian":
        base = PtTanhGaussian(gamma=spec["gamma"], omega=spec["omega"], eta=spec["eta"])
    elif kind == "quadratic_linear":
        base = QuadraticLinear(omega=spec["omega"], gamma=spec["gamma"])
    else:
        base = FreeSpace()
    return hermitian_variant(base) if spec["hermitian"] else base


def _default_half_width(potential: dict) -> float:
    if potential["kind"] == "pt_tanh_gaussian":
        return 8.0 * potential["eta"]
    return 20.0


@dataclass(frozen=True)
class InitialBeam:
    q0: float
    p0: float
    b0: complex
    norm0: float = 1.0
    alpha0: float = 0.0

    def __post_init__(self):
        if not complex(self.b0).imag > 0:
            raise ConfigError(f"Im b0 must be positive, got {self.b0}")
        if self.norm0 < 0:
            raise ConfigError(f"norm0 must be >= 0, got {self.norm0}")

    @classmethod
    def from_dict(cls, d: dict) -> "InitialBeam":
        _check_keys(d, ("q0", "p0", "b0", "norm0", "alpha0"), ("q0", "p0", "b0"), "initial")
        beam = {
            "q0": _number(d, "q0", "initial"),
            "p0": _number(d, "p0", "initial"),
            "b0": _complex_pair(d["b0"], "initial.b0"),
        }
        if "norm0" in d:
            beam["norm0"] = _number(d, "norm0", "initial")
        if "alpha0" in d:
            beam["alpha0"] = _number(d, "alpha0", "initial")
        return cls(**beam)

    def to_dict(self) -> dict:
        return {
            "q0": self.q0,
            "p0": self.p0,
            "b0": [self.b0.real, self.b0.imag],
            "norm0": self.norm0,
            "alpha0": self.alpha0,
        }


@dataclass(frozen=True)
class GaussianSettings:
    dz: float = 1e-3

    def __post_init__(self):
        if not self.dz > 0:
            raise ConfigError(f"gaussian.dz must be positive, got {self.dz}")


@dataclass(frozen=True)
class GridSettings:
    half_width: float
    n_points: int = 4096
    dz: float = 1e-3

    def __post_init__(self):
        if not self.dz > 0:
            raise ConfigError(f"grid.dz must be positive, got {self.dz}")
        try:
            GridSpec(self.half_width, self.n_points)
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc

    def spec(self) -> GridSpec:
        return GridSpec(self.half_width, self.n_points)


@dataclass(frozen=True)
class ScenarioConfig:
    name: str
    potential: dict
    initial: InitialBeam
    propagators: tuple = ("gaussian", "grid")
    z_max: float = 30.0
    gaussian: GaussianSettings = GaussianSettings()
    grid: GridSettings | None = None
    constants: PhysicalConstants = DEFAULT_CONSTANTS
    sample_stride: int = 100
    heatmap: bool = False

    def __post_init__(self):
        object.__setattr__(self, "potential", _validate_potential(self.potential))
        if not self.name:
            raise ConfigError("scenario name must be non-empty")
        props = tuple(self.propagators)
        if not props or len(set(props)) != len(props):
            raise ConfigError(f"propagators must be a non-empty set, got {props!r}")
        for p in props:
            if p not in PROPAGATORS:
                raise ConfigError(f"unknown propagator {p!r}; expected one of {PROPAGATORS}")
        if "oracle" in props and self.potential["kind"] != "quadratic_linear":
            raise ConfigError("the oracle propagator requires a quadratic_linear potential")
        object.__setattr__(self, "propagators", props)
        if not self.z_max > 0:
            raise ConfigError(f"z_max must be positive, got {self.z_max}")
        if not (isinstance(self.sample_stride, int) and self.sample_stride >= 1):
            raise ConfigError(f"sample_stride must be an integer >= 1, got {self.sample_stride}")
        if self.grid is None:
            object.__setattr__(
                self, "grid", GridSettings(half_width=_default_half_width(self.potential))
            )

    @classmethod
    def from_dict(cls, d: dict) -> "ScenarioConfig":
        _check_keys(
            d,
            (
                "schema_version", "name", "potential", "initial", "propagators",
                "z_max", "gaussian", "grid", "constants", "sample_stride", "heatmap",
            ),
            ("schema_version", "name", "potential", "initial"),
            "scenario",
        )
        if d["schema_version"] != SCHEMA_VERSION:
            raise ConfigError(
                f"unsupported schema_version {d['schema_version']!r}; expected {SCHEMA_VERSION}"
            )
        kwargs = {
            "name": d["name"],
            "potential": d["potential"],
            "initial": InitialBeam.from_dict(d["initial"]),
        }
        if not isinstance(kwargs["name"], str):
            raise ConfigError(f"name must be a string, got {kwargs['name']!r}")
        if "propagators" in d:
            if not isinstance(d["propagators"], list):
                raise ConfigError("propagators must be an array of names")
            kwargs["propagators"] = tuple(d["propagators"])
        if "z_max" in d:
            kwargs["z_max"] = _number(d, "z_max", "scenario")
        if "gaussian" in d:
            _check_keys(d["gaussian"], ("dz",), (), "gaussian")
            kwargs["gaussian"] = GaussianSettings(
                **{k: _number(d["gaussian"], k, "gaussian") for k in d["gaussian"]}
            )
        if "grid" in d:
            _check_keys(d["grid"], ("half_width", "n_points", "dz"), (), "grid")
            g = dict(d["grid"])
            if "half_width" not in g:
                g["half_width"] = _default_half_width(_validate_potential(d["potential"]))
            if "n_points" in g:
                n = g["n_points"]
                if isinstance(n, bool) or not isinstance(n, int):
                    raise ConfigError(f"grid.n_points must be an integer, got {n!r}")
            if "dz" in g:
                g["dz"] = _number(g, "dz", "grid")
            kwargs["grid"] = GridSettings(**g)
        if "constants" in d:
            _check_keys(d["constants"], ("hbar", "n_zero"), (), "constants")
            try:
                kwargs["constants"] = PhysicalConstants(
                    **{k: _number(d["constants"], k, "constants") for k in d["constants"]}
                )
            except ValueError as exc:
                raise ConfigError(str(exc)) from exc
        if "sample_stride" in d:
            s = d["sample_stride"]
            if isinstance(s, bool) or not isinstance(s, int):
                raise ConfigError(f"sample_stride must be an integer, got {s!r}")
            kwargs["sample_stride"] = s
        if "heatmap" in d:
            if not isinstance(d["heatmap"], bool):
                raise ConfigError(f"heatmap must be a boolean, got {d['heatmap']!r}")
            kwargs["heatmap"] = d["heatmap"]
        return cls(**kwargs)

    def to_dict(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "name": self.name,
            "potential": dict(self.potential),
            "initial": self.initial.to_dict(),
            "propagators": list(self.propagators),
            "z_max": self.z_max,
            "gaussian": {"dz": self.gaussian.dz},
            "grid": {
                "half_width": self.grid.half_width,
                "n_points": self.grid.n_points,
                "dz": self.grid.dz,
            },
            "constants": {"hbar": self.constants.hbar, "n_zero": self.constants.n_zero},
            "sample_stride": self.sample_stride,
            "heatmap": self.heatmap,
        }

    def build_potential(self) -> Potential:
        return build_potential(self.potential)

    def grid_spec(self) -> GridSpec:
        return self.grid.spec()

    def with_overrides(
        self, z_max=None, dz=None, grid_points=None, heatmap=None
    ) -> "ScenarioConfig":
        cfg = self
        if z_max is not None:
            cfg = replace(cfg, z_max=z_max)
        if dz is not None:
            cfg = replace(
                cfg,
                gaussian=GaussianSettings(dz=dz),
                grid=replace(cfg.grid, dz=dz),
            )
        if grid_points is not None:
            cfg = replace(cfg, grid=replace(cfg.grid, n_points=grid_points))
        if heatmap is not None:
            cfg = replace(cfg, heatmap=heatmap)
        return cfg


@dataclass(frozen=True)
class FilterConfig:
    """Configuration of a width-filtering experiment."""

    name: str
    widths: tuple
    q0: float = 0.0
    p0: float = 0.0
    potential: dict = field(
        default_factory=lambda: {"kind": "quadratic_linear", "omega": 1.0, "gamma": 1.0}
    )
    z_max: float = 1.0
    dz: float = 1e-4
    probe_z: tuple = (1e-3, 1e-2)
    constants: PhysicalConstants = DEFAULT_CONSTANTS

    def __post_init__(self):
        object.__setattr__(self, "potential", _validate_potential(self.potential))
        widths = tuple(complex(w) for w in self.widths)
        if len(widths) < 2:
            raise ConfigError("filter experiment needs at least two widths")
        for w in widths:
            if not w.imag > 0:
                raise ConfigError(f"all widths must have Im b0 > 0, got {w}")
        object.__setattr__(self, "widths", widths)
        if not self.z_max > 0 or not self.dz > 0:
            raise ConfigError("z_max and dz must be positive")
        probes = tuple(float(p) for p in self.probe_z)
        if not probes or any(not 0 < p <= self.z_max for p in probes):
            raise ConfigError("probe_z values must lie in (0, z_max]")
        object.__setattr__(self, "probe_z", probes)

    @classmethod
    def from_dict(cls, d: dict) -> "FilterConfig":
        _check_keys(
            d,
            (
                "schema_version", "name", "widths", "q0", "p0", "potential",
                "z_max", "dz", "probe_z", "constants",
            ),
            ("schema_version", "name", "widths"),
            "filter",
        )
        if d["schema_version"] != SCHEMA_VERSION:
            raise ConfigError(
                f"unsupported schema_version {d['schema_version']!r}; expected {SCHEMA_VERSION}"
            )
        if not isinstance(d["widths"], list):
            raise ConfigError("widths must be an array of [re, im] pairs")
        kwargs = {
            "name": d["name"],
            "widths": tuple(
                _complex_pair(w, f"widths[{i}]") for i, w in enumerate(d["widths"])
            ),
        }
        for key in ("q0", "p0", "z_max", "dz"):
            if key in d:
                kwargs[key] = _number(d, key, "filter")
        if "potential" in d:
            kwargs["potential"] = d["potential"]
        if "probe_z" in d:
            if not isinstance(d["probe_z"], list):
                raise ConfigError("probe_z must be an array of numbers")
            kwargs["probe_z"] = tuple(d["probe_z"])
        if "constants" in d:
            _check_keys(d["constants"], ("hbar", "n_zero"), (), "constants")
            kwargs["constants"] = PhysicalConstants(
                **{k: _number(d["constants"], k, "constants") for k in d["constants"]}
            )
        return cls(**kwargs)

    def to_dict(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "name": self.name,
            "widths": [[w.real, w.imag] for w in self.widths],
            "q0": self.q0,
            "p0": self.p0,
            "potential": dict(self.potential),
            "z_max": self.z_max,
            "dz": self.dz,
            "probe_z": list(self.probe_z),
            "constants": {"hbar": self.constants.hbar, "n_zero": self.constants.n_zero},
        }

    def build_potential(self) -> Potential:
        return build_potential(self.potential)


def _load_json(path) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except FileNotFoundError as exc:
        raise ConfigError(f"config file not found: {path}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"invalid JSON in {path}: {exc}") from exc


def load_scenario(path) -> ScenarioConfig:
    return ScenarioConfig.from_dict(_load_json(path))


def load_filter(path) -> FilterConfig:
    return FilterConfig.from_dict(_load_json(path))
