"""Closed-form printability screens.

Four quick checks for deposition failure modes: plastic collapse of the
extruded slug, buckling of the standing filament under over-extrusion,
and two tearing criteria for under-extrusion (one needs the elastic
shear modulus G and is reported as unavailable without it).  These are
screens, not simulations: each one evaluates a published closed-form
expression and flags when the operating point crosses it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, asdict

from .exceptions import DomainError
from .params import PrintParams, STANDARD_GRAVITY, to_dimensionless


@dataclass(frozen=True)
class RheologyExtras:
    """Optional material data the screens can use.

    G: elastic shear modulus, Pa (None when not measured).
    xi: yield criterion factor relating cohesion to yield stress.
    r_c_ratio: contact radius over nozzle radius for the slug check,
    kept inside its sensible [0.8, 0.9] window.
    """

    G: float | None = None
    xi: float = 1.5
    r_c_ratio: float = 0.85

    def __post_init__(self):
        if self.G is not None and (not math.isfinite(self.G) or self.G <= 0.0):
            raise DomainError("shear modulus G must be positive when given")
        if not (self.xi > 0.0):
            raise DomainError("xi must be positive")
        if not (0.8 <= self.r_c_ratio <= 0.9):
            raise DomainError("r_c_ratio must lie in [0.8, 0.9]")

    @classmethod
    def from_dict(cls, d: dict) -> "RheologyExtras":
        known = {"G", "xi", "r_c_ratio"}
        extra = set(d) - known
        if extra:
            raise DomainError(f"unknown extras fields: {', '.join(sorted(extra))}")
        kwargs = {}
        if d.get("G") is not None:
            kwargs["G"] = float(d["G"])
        if "xi" in d:
            kwargs["xi"] = float(d["xi"])
        if "r_c_ratio" in d:
            kwargs["r_c_ratio"] = float(d["r_c_ratio"])
        return cls(**kwargs)


@dataclass(frozen=True)
class CheckResult:
    """Outcome of one screen."""

    mode: str
    flagged: bool
    available: bool = True
    value: float | None = None       # the quantity the screen evaluates
    threshold: float | None = None   # what it was compared against
    note: str = ""

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class PrintabilityReport:
    slug: CheckResult
    buckling: CheckResult
    tearing_wolfs: CheckResult
    tearing_geffrault: CheckResult

    def checks(self) -> tuple[CheckResult, ...]:
        return (self.slug, self.buckling, self.tearing_wolfs, self.tearing_geffrault)

    @property
    def any_flagged(self) -> bool:
        return any(c.flagged for c in self.checks())

    def flagged_modes(self) -> list[str]:
        return [c.mode for c in self.checks() if c.flagged]

    def to_dict(self) -> dict:
        return {c.mode: c.to_dict() for c in self.checks()}


def check_slug(params: PrintParams, extras: RheologyExtras | None = None) -> CheckResult:
    """Plastic collapse of the slug hanging below the nozzle.

    Critical standoff height (metres internally, reported in mm):

        h_c = (sigma_c / (rho g)) * (r_c / r_n) - (4/3) r_n^2 / r_c + 6 r_n

    with sigma_c = xi * sqrt(3) * tau0 and r_c = r_c_ratio * r_n.
    Flagged when the requested standoff h_n exceeds h_c.
    """
    extras = extras or RheologyExtras()
    _require_positive(params)
    r_n = params.phi_n / 2.0 / 1000.0  # mm -> m
    r_c = extras.r_c_ratio * r_n
    sigma_c = extras.xi * math.sqrt(3.0) * params.tau0
    h_c = (sigma_c / (params.rho * STANDARD_GRAVITY)) * (r_c / r_n) \
        - (4.0 / 3.0) * r_n * r_n / r_c + 6.0 * r_n
    h_c_mm = h_c * 1000.0
    return CheckResult(mode="slug", flagged=params.h_n > h_c_mm,
                       value=params.h_n, threshold=h_c_mm,
                       note=f"critical standoff {h_c_mm:.1f} mm")


def check_buckling(params: PrintParams) -> CheckResult:
    """Buckling of the deposited filament when over-extruding.

    With h* = h_n / phi_n, the filament buckles when v* < 1 - 1/h*.
    For h* <= 1 the threshold is non-positive and the mode is inactive.
    """
    _require_positive(params)
    inputs = to_dimensionless(params)
    h_star = params.h_n / params.phi_n
    threshold = 1.0 - 1.0 / h_star
    return CheckResult(mode="buckling", flagged=inputs.v_star < threshold,
                       value=inputs.v_star, threshold=threshold,
                       note=f"h*={h_star:.3f}, speed ratio threshold "
                            f"{threshold:.3f}")


def check_tearing_wolfs(params: PrintParams,
                        extras: RheologyExtras | None = None,
                        critical: float = 10.0) -> CheckResult:
    """Tearing of an under-extruded filament, strain-magnitude form.

    Evaluates (G / tau0) * ln(v*); values far above 1 mean the filament
    is stretched well past yield before deposition.  `critical` sets
    where 'far above' starts.  Unavailable without G.
    """
    extras = extras or RheologyExtras()
    _require_positive(params)
    if extras.G is None:
        return CheckResult(mode="tearing_wolfs", flagged=False, available=False,
                           note="shear modulus G not provided")
    inputs = to_dimensionless(params)
    value = (extras.G / params.tau0) * math.log(inputs.v_star)
    return CheckResult(mode="tearing_wolfs", flagged=value > critical,
                       value=value, threshold=critical)


def check_tearing_geffrault(params: PrintParams,
                            extras: RheologyExtras | None = None) -> CheckResult:
    """Tearing criterion based on the critical elastic strain.

    eps_c = xi * sqrt(3) * tau0 / G; the filament tears when
    v* > (1 - eps_c)^-2.  eps_c >= 1 means the material yields at any
    stretch, flagged unconditionally.  Unavailable without G.
    """
    extras = extras or RheologyExtras()
    _require_positive(params)
    if extras.G is None:
        return CheckResult(mode="tearing_geffrault", flagged=False, available=False,
                           note="shear modulus G not provided")
    inputs = to_dimensionless(params)
    eps_c = extras.xi * math.sqrt(3.0) * params.tau0 / extras.G
    if eps_c >= 1.0:
        return CheckResult(mode="tearing_geffrault", flagged=True, value=eps_c,
                           threshold=None,
                           note=f"critical strain {eps_c:.3f} >= 1; "
                                "material yields at any stretch")
    threshold = (1.0 - eps_c) ** -2
    return CheckResult(mode="tearing_geffrault", flagged=inputs.v_star > threshold,
                       value=inputs.v_star, threshold=threshold,
                       note=f"critical strain {eps_c:.4f}")


def check_all(params: PrintParams,
              extras: RheologyExtras | None = None) -> PrintabilityReport:
    """Run every screen and bundle the results."""
    extras = extras or RheologyExtras()
    return PrintabilityReport(
        slug=check_slug(params, extras),
        buckling=check_buckling(params),
        tearing_wolfs=check_tearing_wolfs(params, extras),
        tearing_geffrault=check_tearing_geffrault(params, extras),
    )


def _require_positive(params: PrintParams) -> None:
    # reuse the conversion's positivity guard; result discarded
    to_dimensionless(params)
