import numpy as np
import pytest

from beadshape.exceptions import ValidationError
from beadshape.params import PrintParams
from beadshape.pipeline import DEFAULT_RESPONSE_POINTS, predict_response
from beadshape.printability import RheologyExtras

N1 = PrintParams(rho=2100, mu=10, tau0=630, phi_n=25, h_n=12, v_p=40, u_f=40.5)
BUCKLER = PrintParams(rho=2100, mu=10, tau0=630, phi_n=10, h_n=30, v_p=20, u_f=40)


def test_response_structure(small_model):
    doc = predict_response(small_model, N1)
    assert set(doc) == {"format_version", "fourier", "points", "features",
                        "warnings", "model_info"}
    assert len(doc["points"]) == DEFAULT_RESPONSE_POINTS
    assert doc["fourier"]["n_harmonics"] == small_model.config.n_harmonics
    assert doc["model_info"]["best_validation_error"] == pytest.approx(
        small_model.best_validation_error)
    # every value JSON-serializable
    import json
    json.dumps(doc)


def test_response_is_grounded(small_model):
    pts = np.asarray(predict_response(small_model, N1)["points"])
    assert pts[:, 1].min() == 0.0
    assert pts[:, 1].max() > 0.0


def test_n_points_honored(small_model):
    doc = predict_response(small_model, N1, n_points=48)
    assert len(doc["points"]) == 48


def test_strict_mode_raises(small_model):
    out = PrintParams(rho=2000, mu=10, tau0=1500, phi_n=5, h_n=12,
                      v_p=40, u_f=40)
    with pytest.raises(ValidationError) as exc:
        predict_response(small_model, out, mode="strict")
    assert exc.value.violations[0].field == "tau0_star"
    # warn mode degrades the same condition to warnings
    doc = predict_response(small_model, out, mode="warn")
    assert any(w.startswith("range: tau0_star") for w in doc["warnings"])


def test_printability_warnings_appended(small_model):
    doc = predict_response(small_model, BUCKLER)
    assert any(w.startswith("printability: buckling flagged")
               for w in doc["warnings"])
    # tearing screens report unavailable without G
    assert sum(w.startswith("printability: tearing") for w in doc["warnings"]) == 2
    with_g = predict_response(small_model, N1, extras=RheologyExtras(G=10000))
    assert not any("tearing" in w for w in with_g["warnings"])


def test_unusable_prediction_degrades_to_features_none(tiny_model):
    """A model whose output curve self-intersects still answers: points
    come back, features are None, and a warning explains why."""
    from dataclasses import replace
    # zero the network and plant looped coefficients in the decoder bias:
    # a strong second harmonic folds the curve over itself
    weights = {k: np.zeros_like(v) for k, v in tiny_model.weights.items()}
    n = tiny_model.config.n_harmonics
    bias = np.zeros(2 * n - 1)
    bias[0] = 1.0            # c0
    bias[1], bias[2] = 1.0, 1.2   # s1, s2
    bias[n], bias[n + 1] = 1.0, 1.2  # c1, c2
    weights["decoder.b"] = bias
    broken = replace(tiny_model, weights=weights)

    doc = predict_response(broken, N1)
    assert doc["features"] is None
    assert any(w.startswith("features unavailable:") for w in doc["warnings"])
    # the planted curve dips well below y=0, so grounding is reported too
    assert any(w.startswith("grounding:") for w in doc["warnings"])
    assert len(doc["points"]) == DEFAULT_RESPONSE_POINTS
