"""Residual feed-forward network trained from scratch in numpy.

Maps the five normalized process inputs to a packed Fourier coefficient
vector.  Encoder: affine + tanh into the latent width.  Each residual
block standardizes its input per sample over the features (learned
scale and shift), applies affine + tanh, and adds the result back.
Decoder: plain affine down to 2N-1 coefficients.

The loss compares curves, not coefficients: predicted and target shapes
are evaluated on the same uniform parameter grid, and the mean
point-wise distance (normalized by the target's largest point norm)
plus a weighted mean distance between centered-difference derivatives
(normalized by the target's largest derivative norm) is minimized.
Gradients are hand-derived reverse mode; the optimizer is AdamW with a
cosine learning-rate schedule.
"""

from __future__ import annotations

import copy
import json
from dataclasses import dataclass, asdict

import numpy as np

from .exceptions import DomainError
from .fourier import FourierShape, SampledCurve, basis_matrices, uniform_grid, fit
from .params import NormStats, normalize

MODEL_FORMAT_VERSION = 1

LN_EPS = 1e-5

ADAM_BETA1 = 0.9
ADAM_BETA2 = 0.999
ADAM_EPS = 1e-8
WEIGHT_DECAY = 1e-4

# harmonics used when fitting ground-truth targets (2*32-1 = 63 coefficients)
TARGET_HARMONICS = 32


@dataclass(frozen=True)
class NetworkConfig:
    """Architecture and training knobs."""

    n_harmonics: int = 8          # N; the network emits 2N-1 coefficients
    latent_dim: int = 128
    residual_layers: int = 3
    n_points: int = 128           # curve sample count used by the loss
    smoothness_weight: float = 0.1
    noise_sigma: float = 0.002    # stddev of the input jitter, normalized units
    batch_size: int = 16
    epochs: int = 1200
    lr0: float = 1e-3
    lr_min: float = 1e-5
    seed: int = 0

    def __post_init__(self):
        if self.n_harmonics < 2:
            raise DomainError("n_harmonics must be at least 2")
        if self.n_points < 2 * self.n_harmonics:
            raise DomainError("n_points must be at least twice n_harmonics")
        if self.n_points < 2 * TARGET_HARMONICS:
            raise DomainError(
                f"n_points must be at least {2 * TARGET_HARMONICS} to sample targets")
        if self.latent_dim < 1 or self.residual_layers < 1:
            raise DomainError("latent_dim and residual_layers must be positive")
        if self.latent_dim < self.n_coefficients:
            raise DomainError(
                "latent_dim must be at least the coefficient count "
                f"({self.n_coefficients})")
        if self.batch_size < 1 or self.epochs < 1:
            raise DomainError("batch_size and epochs must be positive")
        if not (0 < self.lr_min <= self.lr0):
            raise DomainError("need 0 < lr_min <= lr0")
        if self.smoothness_weight < 0 or self.noise_sigma < 0:
            raise DomainError("weights and noise must be non-negative")

    @property
    def n_coefficients(self) -> int:
        return 2 * self.n_harmonics - 1

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, d: dict) -> "NetworkConfig":
        known = {f for f in cls.__dataclass_fields__}
        extra = set(d) - known
        if extra:
            raise DomainError(f"unknown config fields: {', '.join(sorted(extra))}")
        return cls(**d)


# ---------------------------------------------------------------- weights

def init_weights(cfg: NetworkConfig, rng: np.random.Generator) -> dict[str, np.ndarray]:
    """Fan-in scaled uniform init, lists keys in their canonical order."""
    l, no = cfg.latent_dim, cfg.n_coefficients

    def affine(name, n_out, n_in):
        bound = 1.0 / np.sqrt(n_in)
        w[f"{name}.W"] = rng.uniform(-bound, bound, size=(n_out, n_in))
        w[f"{name}.b"] = rng.uniform(-bound, bound, size=n_out)

    w: dict[str, np.ndarray] = {}
    affine("encoder", l, 5)
    for i in range(cfg.residual_layers):
        w[f"res{i}.norm.scale"] = np.ones(l)
        w[f"res{i}.norm.shift"] = np.zeros(l)
        affine(f"res{i}", l, l)
    affine("decoder", no, l)
    return w


def _layer_norm_forward(h, scale, shift):
    mu = h.mean(axis=1, keepdims=True)
    var = h.var(axis=1, keepdims=True)
    inv = 1.0 / np.sqrt(var + LN_EPS)
    z = (h - mu) * inv
    return z * scale + shift, (z, inv)


def _layer_norm_backward(dout, cache, scale):
    z, inv = cache
    dscale = (dout * z).sum(axis=0)
    dshift = dout.sum(axis=0)
    dz = dout * scale
    dh = inv * (dz - dz.mean(axis=1, keepdims=True)
                - z * (dz * z).mean(axis=1, keepdims=True))
    return dh, dscale, dshift


def forward(weights: dict, X: np.ndarray, cfg: NetworkConfig,
            want_cache: bool = False):
    """Coefficient rows for a batch of normalized inputs (B, 5)."""
    X = np.atleast_2d(np.asarray(X, dtype=float))
    cache = {"X": X}
    a0 = X @ weights["encoder.W"].T + weights["encoder.b"]
    h = np.tanh(a0)
    cache["h0"] = h
    for i in range(cfg.residual_layers):
        zn, ln_cache = _layer_norm_forward(h, weights[f"res{i}.norm.scale"],
                                           weights[f"res{i}.norm.shift"])
        u = np.tanh(zn @ weights[f"res{i}.W"].T + weights[f"res{i}.b"])
        cache[f"res{i}"] = (h, zn, ln_cache, u)
        h = h + u
    F = h @ weights["decoder.W"].T + weights["decoder.b"]
    if want_cache:
        cache["h_last"] = h
        return F, cache
    return F


def backward(weights: dict, cfg: NetworkConfig, cache: dict,
             dF: np.ndarray) -> dict[str, np.ndarray]:
    """Gradients of a scalar loss given d loss / d coefficients."""
    grads: dict[str, np.ndarray] = {}
    h_last = cache["h_last"]
    grads["decoder.W"] = dF.T @ h_last
    grads["decoder.b"] = dF.sum(axis=0)
    dh = dF @ weights["decoder.W"]
    for i in reversed(range(cfg.residual_layers)):
        h_in, zn, ln_cache, u = cache[f"res{i}"]
        du = dh * (1.0 - u * u)            # through tanh
        grads[f"res{i}.W"] = du.T @ zn
        grads[f"res{i}.b"] = du.sum(axis=0)
        dzn = du @ weights[f"res{i}.W"]
        dnorm_in, dscale, dshift = _layer_norm_backward(
            dzn, ln_cache, weights[f"res{i}.norm.scale"])
        grads[f"res{i}.norm.scale"] = dscale
        grads[f"res{i}.norm.shift"] = dshift
        dh = dh + dnorm_in                 # residual: skip path + block path
    h0 = cache["h0"]
    da0 = dh * (1.0 - h0 * h0)
    grads["encoder.W"] = da0.T @ cache["X"]
    grads["encoder.b"] = da0.sum(axis=0)
    return grads


# ---------------------------------------------------------------- loss

def curves_from_coefficients(F: np.ndarray, n_harmonics: int,
                             n_points: int) -> np.ndarray:
    """Evaluate batched coefficient rows on the uniform grid -> (B, n, 2)."""
    F = np.atleast_2d(F)
    t = uniform_grid(n_points)
    S, C = basis_matrices(n_harmonics, t)
    x = F[:, 1:n_harmonics] @ S.T
    y = F[:, :1] + F[:, n_harmonics:] @ C.T
    return np.stack([x, y], axis=2)


def _loss_batch(P: np.ndarray, T: np.ndarray, lam: float, n_points: int):
    """Two-term curve loss and its gradient with respect to P.

    P, T: (B, n, 2) predicted and target points on the shared grid.
    Both terms normalize by target magnitudes, so the normalizers are
    constants of the optimization.
    """
    B, n, _ = P.shape
    diff = P - T
    d = np.linalg.norm(diff, axis=2)                     # (B, n)
    t_norm = np.linalg.norm(T, axis=2)
    max_norm = t_norm.max(axis=1)                        # (B,)
    if np.any(max_norm <= 0.0):
        raise DomainError("target curve is identically zero; cannot normalize")
    L1 = d.mean(axis=1) / max_norm

    # centered differences on the uniform grid; spacing t_{i+1}-t_{i-1}
    dt2 = 2.0 * (2.0 * np.pi / n)
    dP = (P[:, 2:] - P[:, :-2]) / dt2
    dT = (T[:, 2:] - T[:, :-2]) / dt2
    ddiff = dP - dT
    dd = np.linalg.norm(ddiff, axis=2)                   # (B, n-2)
    dmax = np.linalg.norm(dT, axis=2).max(axis=1)
    if np.any(dmax <= 0.0):
        raise DomainError("target derivative is identically zero; cannot normalize")
    L2 = dd.mean(axis=1) / dmax

    loss = float((L1 + lam * L2).mean())

    safe_d = np.where(d > 0.0, d, 1.0)
    g = diff / safe_d[:, :, None]
    g *= (d > 0.0)[:, :, None]
    gP = g / (n * max_norm[:, None, None] * B)

    safe_dd = np.where(dd > 0.0, dd, 1.0)
    gd = ddiff / safe_dd[:, :, None]
    gd *= (dd > 0.0)[:, :, None]
    gd *= lam / ((n - 2) * dmax[:, None, None] * B)
    gP[:, 2:] += gd / dt2
    gP[:, :-2] -= gd / dt2
    return loss, gP


def curve_loss(predicted: SampledCurve, target: SampledCurve,
               smoothness_weight: float) -> float:
    """The training loss for one pair of sampled curves."""
    if predicted.points.shape != target.points.shape:
        raise DomainError("predicted and target curves differ in size")
    if not np.allclose(predicted.t, target.t):
        raise DomainError("predicted and target curves use different grids")
    if len(target.points) < 4:
        raise DomainError("need at least 4 points for the derivative term")
    loss, _ = _loss_batch(predicted.points[None], target.points[None],
                          smoothness_weight, len(target.points))
    return loss


def _coefficient_grad(gP: np.ndarray, n_harmonics: int) -> np.ndarray:
    """Pull the point gradient back through the linear Fourier sampling."""
    n = gP.shape[1]
    t = uniform_grid(n)
    S, C = basis_matrices(n_harmonics, t)
    gx = gP[:, :, 0]
    gy = gP[:, :, 1]
    g_c0 = gy.sum(axis=1, keepdims=True)
    g_s = gx @ S
    g_c = gy @ C
    return np.concatenate([g_c0, g_s, g_c], axis=1)


def loss_and_gradients(weights: dict, cfg: NetworkConfig, X: np.ndarray,
                       T: np.ndarray):
    """Full forward/backward pass for one batch.

    X: (B, 5) normalized inputs (already jittered if training),
    T: (B, n_points, 2) target points.  Returns (loss, grads dict).
    """
    F, cache = forward(weights, X, cfg, want_cache=True)
    P = curves_from_coefficients(F, cfg.n_harmonics, cfg.n_points)
    loss, gP = _loss_batch(P, T, cfg.smoothness_weight, cfg.n_points)
    dF = _coefficient_grad(gP, cfg.n_harmonics)
    grads = backward(weights, cfg, cache, dF)
    return loss, grads


# ---------------------------------------------------------------- optimizer

class AdamW:
    """Decoupled weight decay Adam; decay touches weight matrices only."""

    def __init__(self, weights: dict, weight_decay: float = WEIGHT_DECAY):
        self.m = {k: np.zeros_like(v) for k, v in weights.items()}
        self.v = {k: np.zeros_like(v) for k, v in weights.items()}
        self.t = 0
        self.weight_decay = weight_decay

    def step(self, weights: dict, grads: dict, lr: float) -> None:
        self.t += 1
        b1t = 1.0 - ADAM_BETA1 ** self.t
        b2t = 1.0 - ADAM_BETA2 ** self.t
        for k, g in grads.items():
            m = self.m[k] = ADAM_BETA1 * self.m[k] + (1.0 - ADAM_BETA1) * g
            v = self.v[k] = ADAM_BETA2 * self.v[k] + (1.0 - ADAM_BETA2) * g * g
            update = (m / b1t) / (np.sqrt(v / b2t) + ADAM_EPS)
            if self.weight_decay and k.endswith(".W"):
                update = update + self.weight_decay * weights[k]
            weights[k] -= lr * update


def cosine_lr(epoch: int, cfg: NetworkConfig) -> float:
    """Cosine decay from lr0 to lr_min across the whole run."""
    if cfg.epochs <= 1:
        return cfg.lr_min
    frac = (epoch - 1) / (cfg.epochs - 1)
    return cfg.lr_min + 0.5 * (cfg.lr0 - cfg.lr_min) * (1.0 + np.cos(np.pi * frac))


# ---------------------------------------------------------------- training

@dataclass
class TrainReport:
    epochs_run: int
    best_epoch: int
    best_validation_error: float    # mean point-wise distance, mm
    train_loss: list[float]         # one entry per epoch
    validation: list[tuple[int, float]]  # (epoch, error) every 10 epochs

    def to_dict(self) -> dict:
        return {
            "epochs_run": self.epochs_run,
            "best_epoch": self.best_epoch,
            "best_validation_error": self.best_validation_error,
            "train_loss": self.train_loss,
            "validation": [list(v) for v in self.validation],
        }


@dataclass
class TrainedModel:
    """Weights plus everything needed to use them."""

    config: NetworkConfig
    weights: dict[str, np.ndarray]
    norm_stats: NormStats
    layers: int
    best_epoch: int = 0
    best_validation_error: float = float("nan")

    def coefficients(self, X_normalized) -> np.ndarray:
        return forward(self.weights, X_normalized, self.config)

    def shape_for(self, inputs_vector) -> FourierShape:
        vec = np.asarray(inputs_vector, dtype=float)
        if not np.isfinite(vec).all():
            raise DomainError("inputs contain NaN or Inf")
        z = normalize(vec, self.norm_stats)
        F = forward(self.weights, z[None, :], self.config)
        if not np.isfinite(F).all():
            raise DomainError("model produced non-finite coefficients")
        return FourierShape.from_vector(F[0])

    def save(self, path: str) -> None:
        doc = {
            "format_version": MODEL_FORMAT_VERSION,
            "kind": "beadshape-residual-net",
            "layers": self.layers,
            "config": self.config.to_dict(),
            "norm_stats": self.norm_stats.to_dict(),
            "best_epoch": self.best_epoch,
            "best_validation_error": self.best_validation_error,
            "weights": {
                k: {"shape": list(v.shape), "data": v.ravel().tolist()}
                for k, v in self.weights.items()
            },
        }
        with open(path, "w") as fh:
            json.dump(doc, fh, sort_keys=True)
            fh.write("\n")

    @classmethod
    def load(cls, path: str) -> "TrainedModel":
        with open(path) as fh:
            doc = json.load(fh)
        if doc.get("format_version") != MODEL_FORMAT_VERSION:
            raise DomainError(
                f"unsupported model format_version {doc.get('format_version')!r}")
        cfg = NetworkConfig.from_dict(doc["config"])
        weights = {}
        for k, item in doc["weights"].items():
            arr = np.asarray(item["data"], dtype=float).reshape(item["shape"])
            weights[k] = arr
        expected = set(init_weights(cfg, np.random.default_rng(0)))
        if set(weights) != expected:
            raise DomainError("model weights do not match the configured architecture")
        layers = int(doc["layers"])
        if layers not in (1, 2):
            raise DomainError(f"model layers must be 1 or 2, got {layers}")
        return cls(config=cfg, weights=weights,
                   norm_stats=NormStats.from_dict(doc["norm_stats"]),
                   layers=layers, best_epoch=int(doc.get("best_epoch", 0)),
                   best_validation_error=float(doc.get("best_validation_error",
                                                       float("nan"))))


def build_targets(contours, cfg: NetworkConfig) -> np.ndarray:
    """Fit each contour at the target harmonic count and sample the grid."""
    T = np.empty((len(contours), cfg.n_points, 2))
    t = uniform_grid(cfg.n_points)
    S, C = basis_matrices(TARGET_HARMONICS, t)
    for i, pts in enumerate(contours):
        sh = fit(pts, TARGET_HARMONICS, resample=512)
        T[i, :, 0] = S @ sh.s
        T[i, :, 1] = sh.c0 + C @ sh.c
    return T


def validation_error(weights: dict, cfg: NetworkConfig, Xn: np.ndarray,
                     T: np.ndarray) -> float:
    """Mean point-wise Euclidean distance over a split, no noise.

    Plain millimetre units, averaged over every point of every record.
    """
    F = forward(weights, Xn, cfg)
    P = curves_from_coefficients(F, cfg.n_harmonics, cfg.n_points)
    return float(np.linalg.norm(P - T, axis=2).mean())


def train(train_X, train_contours, val_X, val_contours,
          cfg: NetworkConfig | None = None, layers: int = 1):
    """Fit the network on raw inputs and ground-truth contours.

    train_X, val_X: (n, 5) raw (unnormalized) model input rows.
    Returns (TrainedModel, TrainReport).  The model carries the weight
    snapshot with the best validation error, evaluated every 10 epochs.
    """
    cfg = cfg or NetworkConfig()
    train_X = np.asarray(train_X, dtype=float)
    val_X = np.asarray(val_X, dtype=float)
    if train_X.ndim != 2 or train_X.shape[1] != 5:
        raise DomainError(f"train_X must be (n, 5), got {train_X.shape}")
    if len(train_X) != len(train_contours):
        raise DomainError("train_X and train_contours disagree in length")
    if len(val_X) != len(val_contours):
        raise DomainError("val_X and val_contours disagree in length")
    if len(train_X) < 3:
        raise DomainError("need at least 3 training records")
    if len(val_X) < 1:
        raise DomainError("need at least 1 validation record")

    stats = NormStats.from_inputs(train_X)
    Xn = normalize(train_X, stats)
    Vn = normalize(val_X, stats)
    T = build_targets(train_contours, cfg)
    TV = build_targets(val_contours, cfg)

    rng = np.random.default_rng(cfg.seed)
    weights = init_weights(cfg, rng)
    opt = AdamW(weights)

    best = {"err": np.inf, "epoch": 0, "weights": copy.deepcopy(weights)}
    losses: list[float] = []
    val_hist: list[tuple[int, float]] = []
    n = len(Xn)
    for epoch in range(1, cfg.epochs + 1):
        lr = cosine_lr(epoch, cfg)
        order = rng.permutation(n)
        epoch_loss = 0.0
        for lo in range(0, n, cfg.batch_size):
            idx = order[lo:lo + cfg.batch_size]
            xb = Xn[idx]
            if cfg.noise_sigma > 0.0:
                xb = xb + rng.normal(0.0, cfg.noise_sigma, size=xb.shape)
            loss, grads = loss_and_gradients(weights, cfg, xb, T[idx])
            if not np.isfinite(loss):
                raise DomainError(f"training diverged at epoch {epoch}")
            opt.step(weights, grads, lr)
            epoch_loss += loss * len(idx)
        losses.append(epoch_loss / n)
        if epoch % 10 == 0 or epoch == cfg.epochs:
            err = validation_error(weights, cfg, Vn, TV)
            val_hist.append((epoch, err))
            if err < best["err"]:
                best = {"err": err, "epoch": epoch,
                        "weights": copy.deepcopy(weights)}

    model = TrainedModel(config=cfg, weights=best["weights"], norm_stats=stats,
                         layers=layers, best_epoch=best["epoch"],
                         best_validation_error=float(best["err"]))
    report = TrainReport(epochs_run=cfg.epochs, best_epoch=best["epoch"],
                         best_validation_error=float(best["err"]),
                         train_loss=losses, validation=val_hist)
    return model, report
