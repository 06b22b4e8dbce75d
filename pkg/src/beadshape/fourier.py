"""Symmetric Fourier descriptors for closed bead contours.

A shape with N harmonics is the closed curve

    x(t) = sum_{k=1}^{N-1} s_k sin(k t)
    y(t) = c0 + sum_{k=1}^{N-1} c_k cos(k t),    t in [0, 2*pi)

which is mirror symmetric about the y axis by construction:
x(-t) = -x(t), y(-t) = y(t), and x(0) = 0.  The packed coefficient
vector is (c0, s_1..s_{N-1}, c_1..c_{N-1}), 2N-1 numbers total.

The parameter runs clockwise from the topmost point: t = 0 sits at the
crown and t = pi at the bed.  fit() therefore walks the canonical
(counterclockwise) vertex order in reverse.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin

from .contour import canonicalize, as_points
from .exceptions import DomainError


@dataclass(frozen=True)
class FourierShape:
    """Coefficients of one symmetric closed curve."""

    c0: float
    s: np.ndarray  # sine coefficients of x, harmonics 1..N-1
    c: np.ndarray  # cosine coefficients of y, harmonics 1..N-1

    def __post_init__(self):
        object.__setattr__(self, "s", np.asarray(self.s, dtype=float).ravel())
        object.__setattr__(self, "c", np.asarray(self.c, dtype=float).ravel())
        if len(self.s) != len(self.c):
            raise DomainError("s and c must hold the same number of harmonics")
        if len(self.s) < 1:
            raise DomainError("at least one harmonic is required")
        vals = np.concatenate([[self.c0], self.s, self.c])
        if not np.isfinite(vals).all():
            raise DomainError("Fourier coefficients must be finite")

    @property
    def n_harmonics(self) -> int:
        return len(self.s) + 1

    @property
    def n_coefficients(self) -> int:
        return 2 * self.n_harmonics - 1

    def as_vector(self) -> np.ndarray:
        return np.concatenate([[self.c0], self.s, self.c])

    @classmethod
    def from_vector(cls, vec) -> "FourierShape":
        vec = np.asarray(vec, dtype=float).ravel()
        if len(vec) < 3 or len(vec) % 2 == 0:
            raise DomainError(
                f"coefficient vector length must be odd and >= 3, got {len(vec)}")
        n = (len(vec) + 1) // 2
        return cls(c0=float(vec[0]), s=vec[1:n], c=vec[n:])

    def to_dict(self) -> dict:
        return {"n_harmonics": self.n_harmonics, "c0": self.c0,
                "s": self.s.tolist(), "c": self.c.tolist()}

    @classmethod
    def from_dict(cls, d: dict) -> "FourierShape":
        try:
            shape = cls(c0=float(d["c0"]), s=d["s"], c=d["c"])
        except KeyError as exc:
            raise DomainError(f"shape JSON missing field {exc}") from exc
        if "n_harmonics" in d and int(d["n_harmonics"]) != shape.n_harmonics:
            raise DomainError("n_harmonics does not match coefficient count")
        return shape


@dataclass(frozen=True)
class SampledCurve:
    """Points of a FourierShape evaluated on a parameter grid."""

    t: np.ndarray        # (n,) strictly increasing in [0, 2*pi)
    points: np.ndarray   # (n, 2)


def basis_matrices(n_harmonics: int, t) -> tuple[np.ndarray, np.ndarray]:
    """sin(kt) and cos(kt) design matrices, k = 1..N-1, for a parameter grid."""
    t = np.asarray(t, dtype=float).ravel()
    k = np.arange(1, n_harmonics)
    kt = t[:, None] * k[None, :]
    return np.sin(kt), np.cos(kt)


def uniform_grid(n_points: int) -> np.ndarray:
    return 2.0 * np.pi * np.arange(n_points) / n_points


def sample(shape: FourierShape, n_points: int) -> SampledCurve:
    """Evaluate the shape at n_points parameters uniform in [0, 2*pi).

    n_points must be at least 2N so the highest harmonic is resolved.
    """
    n = int(n_points)
    if n < 2 * shape.n_harmonics:
        raise DomainError(
            f"n_points={n} is below the Nyquist count {2 * shape.n_harmonics} "
            f"for {shape.n_harmonics} harmonics")
    t = uniform_grid(n)
    S, C = basis_matrices(shape.n_harmonics, t)
    x = S @ shape.s
    y = shape.c0 + C @ shape.c
    return SampledCurve(t=t, points=np.column_stack([x, y]))


def _clockwise_from_start(pts: np.ndarray) -> np.ndarray:
    # keep vertex 0, then walk the loop the other way round
    return np.concatenate([pts[:1], pts[:0:-1]])


def fit(points, n_harmonics: int, resample: int | None = 512) -> FourierShape:
    """Least-squares fit of the symmetric basis to a closed contour.

    The contour is canonicalized first (counterclockwise, x-centroid 0,
    topmost start) and the parameter is assigned clockwise from the
    start on a uniform grid.  With `resample` set (the default) the
    contour is re-sampled to that many points uniform in arc length, so
    the parameter is proportional to arc length; with resample=None the
    vertex spacing itself is trusted as the parameterization, which
    makes fit an exact inverse of sample() on its own grids.
    """
    n_harmonics = int(n_harmonics)
    if n_harmonics < 2:
        raise DomainError("n_harmonics must be at least 2")
    pts = canonicalize(points, resample=resample)
    if len(pts) < 2 * n_harmonics:
        raise DomainError(
            f"{len(pts)} points cannot support {n_harmonics} harmonics; "
            f"need at least {2 * n_harmonics}")
    seq = _clockwise_from_start(pts)
    t = uniform_grid(len(seq))
    S, C = basis_matrices(n_harmonics, t)
    s, *_ = np.linalg.lstsq(S, seq[:, 0], rcond=None)
    Ay = np.column_stack([np.ones(len(t)), C])
    cy, *_ = np.linalg.lstsq(Ay, seq[:, 1], rcond=None)
    return FourierShape(c0=float(cy[0]), s=s, c=cy[1:])


def reconstruction_error(points, shape: FourierShape, dense: int = 4096,
                         resample: int | None = 512) -> float:
    """Mean distance from canonicalized contour points to the sampled fit.

    Nearest-point distances against a dense sampling of the shape; a
    plain quality number in mm.
    """
    pts = canonicalize(points, resample=resample)
    curve = sample(shape, max(int(dense), 2 * shape.n_harmonics)).points
    # chunked brute force keeps memory modest
    best = np.full(len(pts), np.inf)
    step = 1024
    for i in range(0, len(curve), step):
        chunk = curve[i:i + step]
        d = np.linalg.norm(pts[:, None, :] - chunk[None, :, :], axis=2)
        best = np.minimum(best, d.min(axis=1))
    return float(best.mean())


class FourierDescriptorTransformer(TransformerMixin, BaseEstimator):
    """Map closed contours to symmetric Fourier coefficient vectors and back.

    transform() takes a list of (n_i, 2) contours and returns an
    (n, 2N-1) coefficient array; inverse_transform() re-samples curves
    from coefficient rows.
    """

    def __init__(self, n_harmonics: int = 8, resample_points: int = 512):
        self.n_harmonics = n_harmonics
        self.resample_points = resample_points

    def fit(self, X=None, y=None):
        if int(self.n_harmonics) < 2:
            raise DomainError("n_harmonics must be at least 2")
        return self

    def transform(self, X) -> np.ndarray:
        self.fit()
        rows = [fit(pts, self.n_harmonics, resample=self.resample_points).as_vector()
                for pts in X]
        return np.vstack(rows)

    def inverse_transform(self, F, n_points: int = 256) -> list[np.ndarray]:
        F = np.atleast_2d(np.asarray(F, dtype=float))
        return [sample(FourierShape.from_vector(row), n_points).points for row in F]


def mirror_x(points) -> np.ndarray:
    """Reflect a contour about the y axis (handy for symmetry tests)."""
    pts = as_points(points).copy()
    pts[:, 0] = -pts[:, 0]
    return pts
