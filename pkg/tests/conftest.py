"""Shared fixtures: a small dataset and models trained on it.

The tiny model exists to exercise plumbing (CLI, service, save/load),
not accuracy.  The small model is trained long enough that train-set
predictions land close to their oracle contours.
"""

from __future__ import annotations

import numpy as np
import pytest

from beadshape.network import NetworkConfig, train
from beadshape.surrogate import build_dataset, load_dataset, split_arrays

TINY_N = 24
TINY_SEED = 3


@pytest.fixture(scope="session")
def tiny_dataset_dir(tmp_path_factory):
    out = tmp_path_factory.mktemp("data") / "tiny"
    build_dataset(str(out), n=TINY_N, layers=1, seed=TINY_SEED)
    return str(out)


@pytest.fixture(scope="session")
def tiny_manifest(tiny_dataset_dir):
    return load_dataset(tiny_dataset_dir)


@pytest.fixture(scope="session")
def tiny_splits(tiny_manifest):
    return {name: split_arrays(tiny_manifest, name)
            for name in ("train", "validation", "test")}


@pytest.fixture(scope="session")
def tiny_train_result(tiny_splits):
    """Fast, inaccurate model for interface tests."""
    Xtr, Ctr = tiny_splits["train"]
    Xva, Cva = tiny_splits["validation"]
    cfg = NetworkConfig(latent_dim=16, residual_layers=1, epochs=40,
                        noise_sigma=0.0, seed=0)
    return train(Xtr, Ctr, Xva, Cva, cfg)


@pytest.fixture(scope="session")
def tiny_model(tiny_train_result):
    return tiny_train_result[0]


@pytest.fixture(scope="session")
def small_train_result(tiny_splits):
    """Trained long enough to reproduce its own training records."""
    Xtr, Ctr = tiny_splits["train"]
    Xva, Cva = tiny_splits["validation"]
    cfg = NetworkConfig(latent_dim=32, residual_layers=2, epochs=600,
                        noise_sigma=0.002, seed=0)
    return train(Xtr, Ctr, Xva, Cva, cfg)


@pytest.fixture(scope="session")
def small_model(small_train_result):
    return small_train_result[0]


def circle_points(r: float = 1.0, cy: float = 1.0, n: int = 256) -> np.ndarray:
    th = np.linspace(0.0, 2.0 * np.pi, n, endpoint=False)
    return np.column_stack([r * np.cos(th), cy + r * np.sin(th)])


def stadium_points(width: float = 30.0, height: float = 10.0,
                   n_arc: int = 64, n_flat: int = 64) -> np.ndarray:
    """Rectangle capped by semicircles, resting on y=0.  CCW order."""
    r = height / 2.0
    half = width / 2.0 - r
    if half <= 0:
        raise ValueError("width must exceed height")
    top = np.column_stack([np.linspace(half, -half, n_flat, endpoint=False),
                           np.full(n_flat, height)])
    th_l = np.linspace(np.pi / 2, 3 * np.pi / 2, n_arc, endpoint=False)
    left = np.column_stack([-half + r * np.cos(th_l), r + r * np.sin(th_l)])
    bottom = np.column_stack([np.linspace(-half, half, n_flat, endpoint=False),
                              np.zeros(n_flat)])
    th_r = np.linspace(-np.pi / 2, np.pi / 2, n_arc, endpoint=False)
    right = np.column_stack([half + r * np.cos(th_r), r + r * np.sin(th_r)])
    return np.vstack([top, left, bottom, right])


def circle_pair_points(r: float = 10.0, gap: float = 1.2,
                       n: int = 1024) -> np.ndarray:
    """Union outline of two circles with centers gap*r apart vertically.

    Centers at (0, r) and (0, r + gap*r); they intersect at
    y = r + gap*r/2 with half-width r*sqrt(1 - (gap/2)^2), which for
    gap=1.2 gives the analytic waist 2*0.8*r = 1.6*r.
    """
    c1, c2 = r, r + gap * r
    y_cross = (c1 + c2) / 2.0
    th = np.linspace(0.0, 2.0 * np.pi, 8 * n, endpoint=False)
    lower = np.column_stack([r * np.cos(th), c1 + r * np.sin(th)])
    upper = np.column_stack([r * np.cos(th), c2 + r * np.sin(th)])
    keep_low = lower[lower[:, 1] <= y_cross]
    keep_up = upper[upper[:, 1] >= y_cross]
    pts = np.vstack([keep_low, keep_up])
    ang = np.arctan2(pts[:, 1] - y_cross, pts[:, 0])
    pts = pts[np.argsort(ang)]
    step = max(1, len(pts) // n)
    return pts[::step]
