"""End-to-end prediction: parameters in, contour plus diagnostics out.

One code path shared by the command line and the HTTP service, so both
report identical warnings and identical numbers.
"""

from __future__ import annotations

import numpy as np

from .exceptions import DomainError
from .features import extract
from .fourier import sample
from .network import MODEL_FORMAT_VERSION, TrainedModel
from .params import (PrintParams, to_dimensionless, validate, normalize)
from .printability import RheologyExtras, check_all

RESPONSE_FORMAT_VERSION = 1
DEFAULT_RESPONSE_POINTS = 256

# grounding shifts larger than this fraction of the height get a warning
GROUND_SHIFT_NOTE = 1e-3


def predict_response(model: TrainedModel, params: PrintParams,
                     extras: RheologyExtras | None = None,
                     n_points: int | None = None,
                     mode: str = "warn") -> dict:
    """Run the full prediction pipeline for one parameter set.

    mode="warn" collects range violations as warnings; mode="strict"
    raises ValidationError instead.  The sampled contour is translated
    so it rests exactly on the bed before features are measured; a
    material shift is reported as a warning.
    """
    if n_points is None:
        n_points = DEFAULT_RESPONSE_POINTS
    warnings: list[str] = []

    inputs = to_dimensionless(params)
    for v in validate(inputs, mode=mode):
        warnings.append(f"range: {v.message()}")

    vec = inputs.as_vector()
    z = normalize(vec[None, :], model.norm_stats)[0]
    outside = np.nonzero((z < 0.0) | (z > 1.0))[0]
    for i in outside:
        warnings.append(
            f"extrapolation: input {i} is outside the training range "
            f"(normalized value {z[i]:.3f})")

    shape = model.shape_for(vec)
    curve = sample(shape, n_points)
    pts = curve.points.copy()
    shift = -float(pts[:, 1].min())
    pts[:, 1] += shift
    height = float(pts[:, 1].max())
    if height <= 0.0:
        raise DomainError("predicted contour has no height")
    if abs(shift) > GROUND_SHIFT_NOTE * height:
        warnings.append(
            f"grounding: contour translated {shift:+.3f} mm onto the bed")

    features = None
    try:
        features = extract(pts, layers=model.layers).to_dict()
        for note in features.get("notes", []):
            warnings.append(f"features: {note}")
    except DomainError as exc:
        warnings.append(f"features unavailable: {exc}")

    report = check_all(params, extras)
    for entry in (report.slug, report.buckling, report.tearing_wolfs,
                  report.tearing_geffrault):
        if entry.flagged:
            warnings.append(f"printability: {entry.mode} flagged ({entry.note})")
        elif not entry.available:
            warnings.append(f"printability: {entry.mode} unavailable ({entry.note})")

    return {
        "format_version": RESPONSE_FORMAT_VERSION,
        "fourier": shape.to_dict(),
        "points": [[float(x), float(y)] for x, y in pts],
        "features": features,
        "warnings": warnings,
        "model_info": {
            "layers": model.layers,
            "version": MODEL_FORMAT_VERSION,
            "best_validation_error": model.best_validation_error,
        },
    }
