"""Scalar geometry read off a cross-section contour.

Width, height, area, bed contact width, and for two-layer sections the
interlayer contact length (the waist where the stacked beads meet).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .contour import canonicalize, check_contour, signed_area
from .exceptions import DomainError

# points lower than this fraction of the height count as touching the bed
BED_BAND = 0.02

# the pinch is searched in this central fraction of the height
PINCH_BAND = (0.2, 0.8)


@dataclass(frozen=True)
class FeatureSet:
    width: float                        # max x extent, mm
    height: float                       # max y, mm
    area: float                         # shoelace, mm^2
    bed_contact: float                  # x extent of near-bed points, mm
    contact_length: float | None = None  # interlayer waist width, mm (2-layer)
    pinch: tuple[float, float] | None = None  # waist point on the +x flank
    notes: tuple[str, ...] = ()

    def to_dict(self) -> dict:
        return {
            "width": self.width,
            "height": self.height,
            "area": self.area,
            "bed_contact": self.bed_contact,
            "contact_length": self.contact_length,
            "pinch": list(self.pinch) if self.pinch else None,
            "notes": list(self.notes),
        }


def extract(points, layers: int = 1) -> FeatureSet:
    """Measure a contour.  layers=2 adds the interlayer contact length.

    The contour is canonicalized (vertex-preserving) first so the
    mirror axis sits at x = 0.  Self-intersecting input is rejected.
    """
    if layers not in (1, 2):
        raise DomainError(f"layers must be 1 or 2, got {layers}")
    pts = check_contour(points, require_bed=False, require_simple=True)
    pts = canonicalize(pts)
    x, y = pts[:, 0], pts[:, 1]
    height = float(y.max())
    if height <= 0.0:
        raise DomainError("contour has no height above the bed")
    width = float(x.max() - x.min())
    area = abs(signed_area(pts))
    near_bed = pts[y < BED_BAND * height]
    bed_contact = float(near_bed[:, 0].max() - near_bed[:, 0].min()) \
        if len(near_bed) else 0.0

    lc, pinch, notes = None, None, ()
    if layers == 2:
        lc, pinch, notes = contact_length(pts)
    return FeatureSet(width=width, height=height, area=area,
                      bed_contact=bed_contact, contact_length=lc,
                      pinch=pinch, notes=notes)


def contact_length(points, band: tuple[float, float] = PINCH_BAND):
    """Find the waist of a stacked two-bead contour.

    Walks the +x flank inside the central height band ordered by y and
    looks for a sign change of dx/dy (centered differences) from
    falling to rising: a local minimum of the half width.  Returns
    (contact_length, (x, y) of the waist, notes); contact_length is
    None with an explanatory note when no pinch exists.
    """
    pts = canonicalize(check_contour(points, require_bed=False,
                                     require_simple=False))
    x, y = pts[:, 0], pts[:, 1]
    height = float(y.max())
    lo, hi = band[0] * height, band[1] * height
    sel = (x > 0.0) & (y >= lo) & (y <= hi)
    flank = pts[sel]
    if len(flank) < 5:
        return None, None, ("no pinch detected: too few flank points in band",)
    flank = flank[np.argsort(flank[:, 1])]
    fx, fy = flank[:, 0], flank[:, 1]
    dy = fy[2:] - fy[:-2]
    ok = np.abs(dy) > 1e-12 * max(height, 1.0)
    slope = np.zeros(len(flank) - 2)
    slope[ok] = (fx[2:] - fx[:-2])[ok] / dy[ok]

    candidates = []
    for i in range(len(slope) - 1):
        if slope[i] < 0.0 <= slope[i + 1]:
            j = i + 1  # center index of the first non-negative slope
            candidates.append(j + 1)  # back to flank indexing
    if not candidates:
        return None, None, ("no pinch detected",)
    # deepest waist wins: around each sign change take the locally
    # narrowest vertex
    refined = []
    for j in candidates:
        lo_j, hi_j = max(0, j - 2), min(len(flank), j + 3)
        k = lo_j + int(np.argmin(fx[lo_j:hi_j]))
        refined.append(k)
    best = min(refined, key=lambda k: fx[k])
    notes = ()
    if len(set(refined)) > 1:
        notes = (f"multiple pinch candidates ({len(set(refined))}), deepest kept",)
    return float(2.0 * fx[best]), (float(fx[best]), float(fy[best])), notes


def features_csv(fs: FeatureSet) -> str:
    """One-row CSV with header, for the command line."""
    cols = ["width", "height", "area", "bed_contact", "contact_length"]
    d = fs.to_dict()
    vals = ["" if d[c] is None else repr(d[c]) for c in cols]
    return ",".join(cols) + "\n" + ",".join(vals) + "\n"
