"""Synthetic ground-truth contours and dataset building.

A cheap stand-in for deposition simulations: each printable parameter
combination maps deterministically to a superellipse-family bead whose
area satisfies mass conservation.  Latin hypercube sampling covers the
parameter box; combinations the printability screens flag are dropped.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, asdict

import numpy as np

from .contour import check_contour, signed_area, write_contour, read_contour
from .exceptions import DomainError
from .params import (PARAM_BOUNDS, PARAM_FIELDS, PrintParams, ModelInputs,
                     to_dimensionless)
from .printability import check_all

MANIFEST_FORMAT_VERSION = 1

# train : validation : test proportions by layer count
SPLIT_RATIOS = {1: (154, 14, 16), 2: (154, 12, 6)}
SPLIT_NAMES = ("train", "validation", "test")


@dataclass(frozen=True)
class SurrogateConfig:
    """Shape-family constants of the synthetic generator."""

    top_width_scale: float = 0.92    # top layer width relative to bottom
    stack_penetration: float = 0.9   # top layer base sits at this fraction of h_bottom
    flank_points: int = 96           # sample count per flank piece
    area_rtol: float = 1e-3          # mass conservation tolerance (0.1%)

    def __post_init__(self):
        if not (0.0 < self.top_width_scale <= 1.0):
            raise DomainError("top_width_scale must be in (0, 1]")
        if not (0.5 <= self.stack_penetration < 1.0):
            raise DomainError("stack_penetration must be in [0.5, 1)")
        if self.flank_points < 8:
            raise DomainError("flank_points must be at least 8")

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class BeadGeometry:
    """Resolved single-bead geometry (mm / mm^2)."""

    area: float       # mass-conservation target
    height: float
    half_width: float
    exponent: float   # superellipse exponent, in (2, 4)


def bead_geometry(params: PrintParams) -> BeadGeometry:
    """Resolve the superellipse family parameters for one scenario.

    Area from mass conservation A = (pi phi_n^2 / 4) / v*; height is the
    free-standing equivalent diameter scaled by tau0*/(1+tau0*), clamped
    by the nozzle standoff; the exponent stiffens from 2 (soft, elliptic)
    toward 4 (stiff, boxy).  Width then follows from the area.
    """
    inputs = to_dimensionless(params)
    area = (np.pi * params.phi_n ** 2 / 4.0) / inputs.v_star
    d_eq = float(np.sqrt(4.0 * area / np.pi))
    stiffness = inputs.tau0_star / (1.0 + inputs.tau0_star)
    height = min(params.h_n, d_eq * stiffness)
    exponent = 2.0 + 2.0 * stiffness
    half_width = area / (2.0 * height * _superellipse_area_factor(exponent))
    return BeadGeometry(area=area, height=height, half_width=half_width,
                        exponent=exponent)


def _superellipse_area_factor(p: float) -> float:
    # area of |x/a|^p + |y/b|^p = 1 is 4ab * Gamma(1+1/p)^2 / Gamma(1+2/p);
    # this returns area / (4ab)
    from math import gamma
    return gamma(1.0 + 1.0 / p) ** 2 / gamma(1.0 + 2.0 / p)


def _flank_xy(phi: np.ndarray, half_width: float, half_height: float,
              y_center: float, p: float) -> np.ndarray:
    """Right flank of a superellipse, phi=0 at the crown, phi=pi at the base."""
    s, c = np.sin(phi), np.cos(phi)
    x = half_width * np.abs(s) ** (2.0 / p)
    y = y_center + half_height * np.sign(c) * np.abs(c) ** (2.0 / p)
    return np.column_stack([x, y])


def _half_width_at(y, y_base: float, height: float, half_width: float,
                   p: float) -> np.ndarray:
    """W(y) of a superellipse standing on y_base; zero outside its band."""
    y = np.asarray(y, dtype=float)
    u = 2.0 * (y - y_base) / height - 1.0
    inside = np.abs(u) <= 1.0
    w = np.zeros_like(y)
    w[inside] = half_width * (1.0 - np.abs(u[inside]) ** p) ** (1.0 / p)
    return w


def _phi_of_y(y: float, y_center: float, half_height: float, p: float) -> float:
    u = np.clip((y - y_center) / half_height, -1.0, 1.0)
    return float(np.arccos(np.sign(u) * np.abs(u) ** (p / 2.0)))


def _mirror_close(right: np.ndarray) -> np.ndarray:
    """Close a contour from its right flank (crown ... bottom, both on x=0)."""
    left = right[-2:0:-1].copy()
    left[:, 0] = -left[:, 0]
    return np.vstack([right, left])


def surrogate_contour(params: PrintParams, layers: int = 1,
                      config: SurrogateConfig | None = None) -> np.ndarray:
    """Deterministic synthetic cross-section for one printable scenario.

    Returns a closed contour in mm, clockwise from the crown, resting on
    y = 0, exactly mirror symmetric.  Raises DomainError when the
    printability screens flag the combination (naming the failure mode)
    or when layers is not 1 or 2.
    """
    cfg = config or SurrogateConfig()
    if layers not in (1, 2):
        raise DomainError(f"layers must be 1 or 2, got {layers}")
    report = check_all(params)
    if report.any_flagged:
        raise DomainError(
            f"unprintable combination, flagged: {', '.join(report.flagged_modes())}")
    geom = bead_geometry(params)
    if layers == 1:
        pts = _single_layer_contour(geom, cfg)
    else:
        pts = _two_layer_contour(geom, cfg)
    pts = check_contour(pts, require_simple=True)
    if layers == 1:
        got = abs(signed_area(pts))
        if abs(got - geom.area) > cfg.area_rtol * geom.area:
            raise DomainError(
                f"generated area {got:.4g} misses target {geom.area:.4g} "
                f"beyond {cfg.area_rtol:.1%}")
    return pts


def _single_layer_contour(geom: BeadGeometry, cfg: SurrogateConfig,
                          width_scale: float = 1.0,
                          y_base: float = 0.0) -> np.ndarray:
    m = cfg.flank_points
    phi = np.linspace(0.0, np.pi, 2 * m + 1)
    right = _flank_xy(phi, geom.half_width * width_scale, geom.height / 2.0,
                      y_base + geom.height / 2.0, geom.exponent)
    # pin the exact crown and base; the power evaluations leave ~1e-16 dust
    right[0] = (0.0, y_base + geom.height)
    right[-1] = (0.0, y_base)
    # the polygon under-shoots the smooth area; rescale x so the shoelace
    # area hits the mass-conservation target exactly (area is linear in x)
    closed = _mirror_close(right)
    target = geom.area * width_scale
    got = abs(signed_area(closed))
    right[:, 0] *= target / got
    return _mirror_close(right)


def _two_layer_contour(geom: BeadGeometry, cfg: SurrogateConfig) -> np.ndarray:
    h = geom.height
    p = geom.exponent
    y0_top = cfg.stack_penetration * h           # base height of the top bead
    w_bot = geom.half_width
    w_top = geom.half_width * cfg.top_width_scale

    def gap(y):
        top = _half_width_at(np.array([y]), y0_top, h, w_top, p)[0]
        bot = _half_width_at(np.array([y]), 0.0, h, w_bot, p)[0]
        return top - bot

    # the flanks cross exactly once between the top bead's base and the
    # bottom bead's crown; bisect for the pinch
    lo, hi = y0_top, h
    if not (gap(lo) < 0.0 < gap(hi)):
        raise DomainError("layer flanks do not cross; stacking assumptions broken")
    for _ in range(90):
        mid = 0.5 * (lo + hi)
        if gap(mid) < 0.0:
            lo = mid
        else:
            hi = mid
    y_x = 0.5 * (lo + hi)
    w_x = _half_width_at(np.array([y_x]), 0.0, h, w_bot, p)[0]

    m = cfg.flank_points
    # top piece: crown of the top bead down to the crossing
    phi_top = np.linspace(0.0, _phi_of_y(y_x, y0_top + h / 2.0, h / 2.0, p),
                          m, endpoint=False)
    top_piece = _flank_xy(phi_top, w_top, h / 2.0, y0_top + h / 2.0, p)
    top_piece[0] = (0.0, y0_top + h)
    # bottom piece: crossing down to the bed
    phi_bot = np.linspace(_phi_of_y(y_x, h / 2.0, h / 2.0, p), np.pi, m + 1)[1:]
    bot_piece = _flank_xy(phi_bot, w_bot, h / 2.0, h / 2.0, p)
    bot_piece[-1] = (0.0, 0.0)
    right = np.vstack([top_piece, [[w_x, y_x]], bot_piece])
    return _mirror_close(right)


def lhs_sample(n: int, bounds: dict[str, tuple[float, float]] | None = None,
               seed: int = 0, rng: np.random.Generator | None = None
               ) -> list[PrintParams]:
    """Latin hypercube draw of n parameter combinations.

    Each parameter's n samples land in n distinct equal-width strata,
    one per stratum.  Deterministic for a given seed.  Bounds may
    collapse to a point (lo == hi).
    """
    bounds = dict(PARAM_BOUNDS if bounds is None else bounds)
    missing = [k for k in PARAM_FIELDS if k not in bounds]
    if missing:
        raise DomainError(f"bounds missing parameters: {', '.join(missing)}")
    if n < 1:
        raise DomainError("n must be at least 1")
    for name in PARAM_FIELDS:
        lo, hi = bounds[name]
        if not (0.0 < lo <= hi):
            raise DomainError(f"bad bounds for {name}: [{lo}, {hi}]")
    gen = rng if rng is not None else np.random.default_rng(seed)
    cols = {}
    for name in PARAM_FIELDS:  # fixed order keeps the stream reproducible
        lo, hi = bounds[name]
        strata = gen.permutation(n)
        offset = gen.uniform(size=n)
        cols[name] = lo + (hi - lo) * (strata + offset) / n
    return [PrintParams(**{k: float(cols[k][i]) for k in PARAM_FIELDS})
            for i in range(n)]


def _split_counts(n: int, ratios: tuple[int, int, int]) -> list[int]:
    total = sum(ratios)
    exact = [n * r / total for r in ratios]
    counts = [int(np.floor(e)) for e in exact]
    # largest remainder fills the rest; train wins ties (listed first)
    remainders = sorted(range(3), key=lambda i: (-(exact[i] - counts[i]), i))
    for i in range(n - sum(counts)):
        counts[remainders[i % 3]] += 1
    return counts


def _assign_splits(kept: list[PrintParams], counts: list[int],
                   rng: np.random.Generator) -> dict[int, str]:
    """Map record index to split name.

    Held-out records are drawn from the interior of the dimensionless
    input distribution: yield-stress number and speed ratio both inside
    their 5th..95th percentiles.  Records at the extremes stay in the
    training split, so validation and test measure interpolation rather
    than extrapolation off the sampled ranges.
    """
    inputs = np.array([to_dimensionless(p).as_vector() for p in kept])
    tau0n, vrat = inputs[:, 0], inputs[:, 4]
    t_lo, t_hi = np.quantile(tau0n, (0.05, 0.95))
    v_lo, v_hi = np.quantile(vrat, (0.05, 0.95))
    interior = np.nonzero((tau0n >= t_lo) & (tau0n <= t_hi)
                          & (vrat >= v_lo) & (vrat <= v_hi))[0]
    pool = rng.permutation(interior)
    n_held = counts[1] + counts[2]
    if len(pool) < n_held:  # tiny dataset: top up from the edge records
        edge = np.setdiff1d(np.arange(len(kept)), interior)
        pool = np.concatenate([pool, rng.permutation(edge)])
    split_of = dict.fromkeys(range(len(kept)), SPLIT_NAMES[0])
    for idx in pool[:counts[1]]:
        split_of[int(idx)] = SPLIT_NAMES[1]
    for idx in pool[counts[1]:n_held]:
        split_of[int(idx)] = SPLIT_NAMES[2]
    return split_of


def build_dataset(out_dir: str, n: int, layers: int = 1,
                  bounds: dict[str, tuple[float, float]] | None = None,
                  seed: int = 0, config: SurrogateConfig | None = None,
                  split_ratios: tuple[int, int, int] | None = None) -> dict:
    """Generate a synthetic dataset on disk and return its manifest.

    Draws n LHS combinations, drops the ones the printability screens
    flag, writes one contour file per surviving record plus a
    manifest.json.  Identical seeds give byte-identical outputs.
    """
    if n < 10:
        raise DomainError("n must be at least 10")
    if layers not in (1, 2):
        raise DomainError(f"layers must be 1 or 2, got {layers}")
    cfg = config or SurrogateConfig()
    ratios = tuple(split_ratios) if split_ratios else SPLIT_RATIOS[layers]
    if len(ratios) != 3 or min(ratios) < 0 or sum(ratios) <= 0:
        raise DomainError(f"bad split ratios {ratios}")

    gen = np.random.default_rng(seed)
    candidates = lhs_sample(n, bounds=bounds, rng=gen)
    kept: list[PrintParams] = []
    dropped: dict[str, int] = {}
    for p in candidates:
        report = check_all(p)
        if report.any_flagged:
            for mode in report.flagged_modes():
                dropped[mode] = dropped.get(mode, 0) + 1
        else:
            kept.append(p)
    if len(kept) < 3:
        raise DomainError(f"only {len(kept)} printable records out of {n}; "
                          "widen the bounds or raise n")

    counts = _split_counts(len(kept), ratios)
    split_of = _assign_splits(kept, counts, gen)

    os.makedirs(out_dir, exist_ok=True)
    records = []
    for i, p in enumerate(kept):
        rid = f"r{i:04d}"
        pts = surrogate_contour(p, layers=layers, config=cfg)
        fname = f"{rid}.txt"
        write_contour(os.path.join(out_dir, fname), pts)
        records.append({
            "id": rid,
            "params": p.to_dict(),
            "inputs": to_dimensionless(p).to_dict(),
            "layers": layers,
            "contour_file": fname,
            "split": split_of[i],
        })

    manifest = {
        "format_version": MANIFEST_FORMAT_VERSION,
        "layers": layers,
        "seed": seed,
        "n_requested": n,
        "n_printable": len(kept),
        "dropped": dict(sorted(dropped.items())),
        "bounds": {k: list(v) for k, v in
                   (PARAM_BOUNDS if bounds is None else bounds).items()},
        "surrogate": cfg.to_dict(),
        "split_ratios": list(ratios),
        "split_counts": dict(zip(SPLIT_NAMES, counts)),
        "records": records,
    }
    with open(os.path.join(out_dir, "manifest.json"), "w") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return manifest


def load_dataset(path: str) -> dict:
    """Read a manifest and its contour files back into memory.

    Returns the manifest dict with each record gaining a 'contour'
    array.  `path` may be the dataset directory or the manifest file.
    """
    mdir = path
    mfile = os.path.join(path, "manifest.json")
    if os.path.isfile(path):
        mfile, mdir = path, os.path.dirname(path)
    if not os.path.isfile(mfile):
        raise DomainError(f"no manifest.json under {path!r}")
    with open(mfile) as fh:
        manifest = json.load(fh)
    if manifest.get("format_version") != MANIFEST_FORMAT_VERSION:
        raise DomainError(
            f"unsupported manifest format_version {manifest.get('format_version')!r}")
    for rec in manifest["records"]:
        rec["contour"] = read_contour(os.path.join(mdir, rec["contour_file"]))
    return manifest


def split_arrays(manifest: dict, split: str) -> tuple[np.ndarray, list[np.ndarray]]:
    """Inputs array (n, 5) and contour list for one split of a loaded dataset."""
    if split not in SPLIT_NAMES:
        raise DomainError(f"unknown split {split!r}")
    rows, contours = [], []
    for rec in manifest["records"]:
        if rec["split"] == split:
            rows.append(ModelInputs.from_dict(rec["inputs"]).as_vector())
            contours.append(rec["contour"])
    X = np.array(rows, dtype=float).reshape(len(rows), 5)
    return X, contours
