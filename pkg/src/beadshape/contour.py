"""Closed cross-section contours: validation, canonical form, file IO.

A contour is a plain (n, 2) float array of x, y vertices in mm describing
one closed loop (the closing edge from the last vertex back to the first
is implicit).  y = 0 is the print bed.
"""

from __future__ import annotations

import numpy as np

from .exceptions import DomainError

# How far below the bed a stored contour may dip before it is rejected, mm.
EPS_BED = 1e-6

MIN_POINTS = 8


def as_points(points) -> np.ndarray:
    """Coerce to an (n, 2) float array, dropping a duplicated closing vertex."""
    pts = np.asarray(points, dtype=float)
    if pts.ndim != 2 or pts.shape[1] != 2:
        raise DomainError(f"contour must be an (n, 2) array, got shape {pts.shape}")
    if not np.isfinite(pts).all():
        raise DomainError("contour contains non-finite coordinates")
    if len(pts) >= 2 and np.array_equal(pts[0], pts[-1]):
        pts = pts[:-1]
    return pts


def check_contour(points, *, require_bed: bool = True,
                  require_simple: bool = True) -> np.ndarray:
    """Validate a contour and return it as an (n, 2) array.

    Checks vertex count, finiteness, optionally the bed constraint
    (no vertex below y = -EPS_BED) and self-intersection.
    """
    pts = as_points(points)
    if len(pts) < MIN_POINTS:
        raise DomainError(f"contour needs at least {MIN_POINTS} points, got {len(pts)}")
    if require_bed and pts[:, 1].min() < -EPS_BED:
        raise DomainError(
            f"contour dips {-pts[:, 1].min():.3g} mm below the bed (limit {EPS_BED:g})")
    if require_simple and not is_simple(pts):
        raise DomainError("contour is self-intersecting")
    return pts


def signed_area(points) -> float:
    """Shoelace area; positive for counterclockwise vertex order."""
    pts = as_points(points)
    x, y = pts[:, 0], pts[:, 1]
    return 0.5 * float(np.sum(x * np.roll(y, -1) - np.roll(x, -1) * y))


def area(points) -> float:
    return abs(signed_area(points))


def edge_lengths(pts: np.ndarray) -> np.ndarray:
    return np.linalg.norm(np.roll(pts, -1, axis=0) - pts, axis=1)


def perimeter(points) -> float:
    return float(edge_lengths(as_points(points)).sum())


def is_simple(points, rel_eps: float = 1e-12) -> bool:
    """True when no two non-adjacent edges properly cross.

    Vectorized orientation test over all edge pairs; fine for the few
    hundred vertices these contours carry.
    """
    pts = as_points(points)
    n = len(pts)
    if n < 3:
        return False
    a = pts
    b = np.roll(pts, -1, axis=0)
    scale = max(np.ptp(pts[:, 0]), np.ptp(pts[:, 1]), 1e-30)
    eps = rel_eps * scale * scale

    def cross(o, p, q):
        return ((p[..., 0] - o[..., 0]) * (q[..., 1] - o[..., 1])
                - (p[..., 1] - o[..., 1]) * (q[..., 0] - o[..., 0]))

    # pairwise orientation products; edges i and j cross iff both straddle
    d1 = cross(a[:, None], b[:, None], a[None, :])
    d2 = cross(a[:, None], b[:, None], b[None, :])
    d3 = cross(a[None, :], b[None, :], a[:, None])
    d4 = cross(a[None, :], b[None, :], b[:, None])
    straddle = (d1 * d2 < -eps) & (d3 * d4 < -eps)

    idx = np.arange(n)
    adjacent = (np.abs(idx[:, None] - idx[None, :]) % (n - 1) <= 1)
    straddle &= ~adjacent
    return not bool(straddle.any())


def arc_centroid_x(pts: np.ndarray) -> float:
    """x of the perimeter (arc-length weighted) centroid."""
    w = edge_lengths(pts)
    mid = 0.5 * (pts[:, 0] + np.roll(pts[:, 0], -1))
    total = w.sum()
    if total <= 0.0:
        raise DomainError("contour has zero perimeter")
    return float((w * mid).sum() / total)


def resample_uniform_arc(points, m: int) -> np.ndarray:
    """Resample a closed polyline at m points equally spaced in arc length.

    The first output point is the first input vertex; interpolation is
    linear along the polyline.
    """
    pts = as_points(points)
    if m < 3:
        raise DomainError("resample count must be at least 3")
    seg = edge_lengths(pts)
    total = seg.sum()
    if total <= 0.0:
        raise DomainError("contour has zero perimeter")
    cum = np.concatenate([[0.0], np.cumsum(seg)])  # length n+1, cum[-1] = total
    targets = np.arange(m) * (total / m)
    idx = np.searchsorted(cum, targets, side="right") - 1
    idx = np.clip(idx, 0, len(pts) - 1)
    frac = (targets - cum[idx]) / np.where(seg[idx] > 0, seg[idx], 1.0)
    nxt = (idx + 1) % len(pts)
    return pts[idx] + frac[:, None] * (pts[nxt] - pts[idx])


def _top_start_index(pts: np.ndarray) -> int:
    y = pts[:, 1]
    scale = max(1.0, float(np.abs(pts).max()))
    tol = 1e-9 * scale
    cand = np.nonzero(y >= y.max() - tol)[0]
    if len(cand) == 1:
        return int(cand[0])
    # tie: smallest |x| wins, then the +x member of a symmetric pair
    ax = np.abs(pts[cand, 0])
    cand = cand[ax <= ax.min() + tol]
    return int(cand[np.argmax(pts[cand, 0])])


def canonicalize(points, resample: int | None = None) -> np.ndarray:
    """Put a contour in canonical form.

    Counterclockwise vertex order, x-centroid (arc-length weighted) at 0,
    first vertex at the topmost point (ties: smallest |x|).  When
    `resample` is given the contour is first re-sampled to that many
    points uniformly spaced in arc length, otherwise the vertex set is
    preserved.
    """
    pts = check_contour(points, require_bed=False, require_simple=False)
    if signed_area(pts) < 0.0:
        pts = pts[::-1].copy()
    pts = pts.copy()
    pts[:, 0] -= arc_centroid_x(pts)
    if resample is not None:
        pts = resample_uniform_arc(pts, int(resample))
    start = _top_start_index(pts)
    return np.roll(pts, -start, axis=0)


def write_contour(path, points) -> None:
    """Write one 'x,y' pair per line, mm, no header. repr() floats round-trip."""
    pts = as_points(points)
    lines = [f"{x!r},{y!r}" for x, y in pts.tolist()]
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")


def read_contour(path) -> np.ndarray:
    pts = []
    with open(path) as fh:
        for ln, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line:
                continue
            parts = line.split(",")
            if len(parts) != 2:
                raise DomainError(f"{path}:{ln}: expected 'x,y', got {line!r}")
            try:
                pts.append((float(parts[0]), float(parts[1])))
            except ValueError as exc:
                raise DomainError(f"{path}:{ln}: {exc}") from exc
    return check_contour(pts)
