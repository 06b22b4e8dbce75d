"""Scikit-learn style estimator around the shape network.

FilamentShapeRegressor.fit takes raw dimensionless input rows and the
matching ground-truth contours; predict returns Fourier coefficient
rows.  All constructor arguments are plain values so get_params /
set_params / clone behave the way sklearn expects.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, RegressorMixin

from .exceptions import DomainError
from .fourier import FourierShape, sample
from .network import NetworkConfig, build_targets, curves_from_coefficients, train
from .params import normalize

# harmonic counts found adequate per layer mode during development
DEFAULT_HARMONICS = {1: 8, 2: 16}


class FilamentShapeRegressor(RegressorMixin, BaseEstimator):
    """Predict Fourier contour coefficients from dimensionless inputs.

    Parameters mirror NetworkConfig; n_harmonics=None resolves by layer
    mode (8 for single beads, 16 for stacked pairs).  A validation split
    may be passed to fit explicitly; otherwise validation_fraction of
    the training rows (the trailing rows after a seeded shuffle) is
    held out for best-snapshot selection.
    """

    def __init__(self, n_harmonics=None, latent_dim=128, residual_layers=3,
                 n_points=128, smoothness_weight=0.1, noise_sigma=0.002,
                 batch_size=16, epochs=1200, lr0=1e-3, lr_min=1e-5,
                 seed=0, layers=1, validation_fraction=0.1):
        self.n_harmonics = n_harmonics
        self.latent_dim = latent_dim
        self.residual_layers = residual_layers
        self.n_points = n_points
        self.smoothness_weight = smoothness_weight
        self.noise_sigma = noise_sigma
        self.batch_size = batch_size
        self.epochs = epochs
        self.lr0 = lr0
        self.lr_min = lr_min
        self.seed = seed
        self.layers = layers
        self.validation_fraction = validation_fraction

    def _config(self) -> NetworkConfig:
        n_h = self.n_harmonics
        if n_h is None:
            if self.layers not in DEFAULT_HARMONICS:
                raise DomainError(f"layers must be 1 or 2, got {self.layers}")
            n_h = DEFAULT_HARMONICS[self.layers]
        return NetworkConfig(
            n_harmonics=n_h, latent_dim=self.latent_dim,
            residual_layers=self.residual_layers, n_points=self.n_points,
            smoothness_weight=self.smoothness_weight,
            noise_sigma=self.noise_sigma, batch_size=self.batch_size,
            epochs=self.epochs, lr0=self.lr0, lr_min=self.lr_min,
            seed=self.seed)

    def fit(self, X, y, validation=None):
        """Train the network.

        X: (n, 5) raw dimensionless rows; y: list of contour arrays.
        validation: optional (X_val, y_val) pair; without it the last
        validation_fraction of a seeded shuffle is held out.
        """
        X = np.asarray(X, dtype=float)
        if X.ndim != 2 or X.shape[1] != 5:
            raise DomainError(f"X must be (n, 5), got {X.shape}")
        if len(X) != len(y):
            raise DomainError("X and y disagree in length")
        cfg = self._config()
        if validation is not None:
            Xv, yv = validation
            Xt, yt = X, list(y)
        else:
            if not 0.0 < self.validation_fraction < 1.0:
                raise DomainError("validation_fraction must be in (0, 1)")
            n_val = max(1, int(round(self.validation_fraction * len(X))))
            if n_val >= len(X):
                raise DomainError("validation_fraction leaves no training rows")
            order = np.random.default_rng(self.seed).permutation(len(X))
            hold, keep = order[:n_val], order[n_val:]
            Xt = X[keep]
            yt = [y[i] for i in keep]
            Xv = X[hold]
            yv = [y[i] for i in hold]
        self.model_, self.report_ = train(Xt, yt, Xv, yv, cfg,
                                          layers=self.layers)
        return self

    def _check_fitted(self):
        if not hasattr(self, "model_"):
            raise DomainError("estimator is not fitted; call fit first")

    def predict(self, X) -> np.ndarray:
        """Fourier coefficient rows (n, 2N-1) for raw input rows."""
        self._check_fitted()
        X = np.asarray(X, dtype=float)
        if X.ndim != 2 or X.shape[1] != 5:
            raise DomainError(f"X must be (n, 5), got {X.shape}")
        Xn = normalize(X, self.model_.norm_stats)
        return self.model_.coefficients(Xn)

    def predict_shapes(self, X) -> list[FourierShape]:
        return [FourierShape.from_vector(row) for row in self.predict(X)]

    def predict_contours(self, X, n_points: int = 256) -> list[np.ndarray]:
        return [sample(s, n_points).points for s in self.predict_shapes(X)]

    def score(self, X, y) -> float:
        """Negative mean normalized curve distance (higher is better)."""
        self._check_fitted()
        cfg = self.model_.config
        T = build_targets(y, cfg)
        F = self.predict(X)
        P = curves_from_coefficients(F, cfg.n_harmonics, cfg.n_points)
        d = np.linalg.norm(P - T, axis=2).mean(axis=1)
        scale = np.linalg.norm(T, axis=2).max(axis=1)
        return -float((d / scale).mean())
