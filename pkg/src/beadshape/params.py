"""Process parameters, reduced model inputs, and input normalization.

Units follow the lab conventions: densities in kg/m^3, stresses in Pa,
viscosities in Pa*s, lengths in mm, speeds in mm/s.  The two derived
groups are dimensionless.
"""

from __future__ import annotations

from dataclasses import dataclass, asdict, fields

import numpy as np

from .exceptions import DomainError, RangeViolation, ValidationError

# m/s^2. Every check that weighs the material uses this same constant.
STANDARD_GRAVITY = 9.81

# Supported ranges of the raw process parameters.
PARAM_BOUNDS: dict[str, tuple[float, float]] = {
    "rho": (2000.0, 2500.0),     # kg/m^3
    "mu": (1.0, 30.0),           # Pa*s
    "tau0": (100.0, 1500.0),     # Pa
    "phi_n": (5.0, 30.0),        # mm
    "h_n": (5.0, 30.0),          # mm
    "v_p": (10.0, 300.0),        # mm/s
    "u_f": (10.0, 300.0),        # mm/s
}

# Ranges of the reduced five-component model input.
INPUT_BOUNDS: dict[str, tuple[float, float]] = {
    "tau0_star": (0.1, 7.6),
    "mu": (1.0, 30.0),
    "phi_n": (5.0, 30.0),
    "h_n": (5.0, 30.0),
    "v_star": (0.03, 30.0),
}

PARAM_FIELDS = tuple(PARAM_BOUNDS)
INPUT_FIELDS = tuple(INPUT_BOUNDS)


@dataclass(frozen=True)
class PrintParams:
    """One printing scenario described by the seven raw parameters."""

    rho: float     # material density, kg/m^3
    mu: float      # plastic viscosity, Pa*s
    tau0: float    # yield stress, Pa
    phi_n: float   # nozzle diameter, mm
    h_n: float     # nozzle standoff height, mm
    v_p: float     # print head travel speed, mm/s
    u_f: float     # mean extrusion velocity in the nozzle, mm/s

    def to_dict(self) -> dict[str, float]:
        return asdict(self)

    @classmethod
    def from_dict(cls, d: dict) -> "PrintParams":
        missing = [f.name for f in fields(cls) if f.name not in d]
        if missing:
            raise DomainError(f"missing parameter fields: {', '.join(missing)}")
        extra = [k for k in d if k not in PARAM_FIELDS]
        if extra:
            raise DomainError(f"unknown parameter fields: {', '.join(sorted(extra))}")
        try:
            values = {k: float(d[k]) for k in PARAM_FIELDS}
        except (TypeError, ValueError) as exc:
            raise DomainError(f"non-numeric parameter value: {exc}") from exc
        return cls(**values)


@dataclass(frozen=True)
class ModelInputs:
    """Reduced five-component input actually fed to the network."""

    tau0_star: float  # yield stress over gravity stress at nozzle scale
    mu: float         # Pa*s
    phi_n: float      # mm
    h_n: float        # mm
    v_star: float     # travel speed over extrusion velocity

    def as_vector(self) -> np.ndarray:
        return np.array([self.tau0_star, self.mu, self.phi_n, self.h_n, self.v_star],
                        dtype=float)

    def to_dict(self) -> dict[str, float]:
        return asdict(self)

    @classmethod
    def from_dict(cls, d: dict) -> "ModelInputs":
        missing = [k for k in INPUT_FIELDS if k not in d]
        if missing:
            raise DomainError(f"missing input fields: {', '.join(missing)}")
        return cls(**{k: float(d[k]) for k in INPUT_FIELDS})

    @classmethod
    def from_vector(cls, v) -> "ModelInputs":
        v = np.asarray(v, dtype=float).ravel()
        if v.shape != (5,):
            raise DomainError(f"expected 5 input values, got shape {v.shape}")
        return cls(*v.tolist())


def to_dimensionless(params: PrintParams) -> ModelInputs:
    """Collapse the seven raw parameters into the five model inputs.

    tau0_star = tau0 / (rho * g * phi_n), with phi_n converted to metres;
    v_star = v_p / u_f.  Raises DomainError when any parameter is not a
    positive finite number.
    """
    for name in PARAM_FIELDS:
        value = getattr(params, name)
        if not np.isfinite(value) or value <= 0.0:
            raise DomainError(f"{name}={value!r} must be a positive finite number")
    phi_m = params.phi_n / 1000.0  # mm -> m
    tau0_star = params.tau0 / (params.rho * STANDARD_GRAVITY * phi_m)
    v_star = params.v_p / params.u_f
    return ModelInputs(tau0_star=tau0_star, mu=params.mu, phi_n=params.phi_n,
                       h_n=params.h_n, v_star=v_star)


def check_ranges(values: dict[str, float],
                 bounds: dict[str, tuple[float, float]]) -> list[RangeViolation]:
    out = []
    for name, (lo, hi) in bounds.items():
        v = values[name]
        if not (lo <= v <= hi):
            out.append(RangeViolation(name, v, lo, hi))
    return out


def validate(inputs: ModelInputs, mode: str = "strict") -> list[RangeViolation]:
    """Check the reduced inputs against their supported ranges.

    mode="strict" raises ValidationError on any violation; mode="warn"
    returns the list of violations (possibly empty) instead.
    """
    if mode not in ("strict", "warn"):
        raise DomainError(f"unknown validation mode {mode!r}")
    violations = check_ranges(inputs.to_dict(), INPUT_BOUNDS)
    if violations and mode == "strict":
        raise ValidationError(violations)
    return violations


def validate_params(params: PrintParams, mode: str = "strict") -> list[RangeViolation]:
    """Same as validate() but for the raw seven-parameter ranges."""
    if mode not in ("strict", "warn"):
        raise DomainError(f"unknown validation mode {mode!r}")
    violations = check_ranges(params.to_dict(), PARAM_BOUNDS)
    if violations and mode == "strict":
        raise ValidationError(violations)
    return violations


class NormStats:
    """Per-field min and max of the model inputs over a training set."""

    def __init__(self, minimum, maximum):
        self.minimum = np.asarray(minimum, dtype=float).ravel()
        self.maximum = np.asarray(maximum, dtype=float).ravel()
        if self.minimum.shape != (5,) or self.maximum.shape != (5,):
            raise DomainError("normalization stats need exactly 5 fields")
        if not (np.isfinite(self.minimum).all() and np.isfinite(self.maximum).all()):
            raise DomainError("normalization stats must be finite")
        if np.any(self.maximum <= self.minimum):
            bad = [INPUT_FIELDS[i] for i in np.nonzero(self.maximum <= self.minimum)[0]]
            raise DomainError(f"degenerate normalization range for: {', '.join(bad)}")

    @classmethod
    def from_inputs(cls, X) -> "NormStats":
        X = np.asarray(X, dtype=float)
        if X.ndim != 2 or X.shape[1] != 5:
            raise DomainError(f"expected an (n, 5) input array, got {X.shape}")
        return cls(X.min(axis=0), X.max(axis=0))

    def to_dict(self) -> dict:
        return {
            "minimum": dict(zip(INPUT_FIELDS, self.minimum.tolist())),
            "maximum": dict(zip(INPUT_FIELDS, self.maximum.tolist())),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "NormStats":
        try:
            mn = [d["minimum"][k] for k in INPUT_FIELDS]
            mx = [d["maximum"][k] for k in INPUT_FIELDS]
        except KeyError as exc:
            raise DomainError(f"normalization stats missing field {exc}") from exc
        return cls(mn, mx)


def normalize(X, stats: NormStats) -> np.ndarray:
    """Min-max scale inputs to [0, 1] per field.

    Values outside [0, 1] are allowed (extrapolation) and left as-is;
    callers flag them.  Accepts a single 5-vector or an (n, 5) array.
    """
    X = np.asarray(X, dtype=float)
    return (X - stats.minimum) / (stats.maximum - stats.minimum)


def denormalize(Z, stats: NormStats) -> np.ndarray:
    Z = np.asarray(Z, dtype=float)
    return stats.minimum + Z * (stats.maximum - stats.minimum)
