import numpy as np
import pytest
from sklearn.base import clone

from beadshape.estimator import DEFAULT_HARMONICS, FilamentShapeRegressor
from beadshape.exceptions import DomainError


def _fast_regressor(**over):
    kw = dict(n_harmonics=4, latent_dim=8, residual_layers=1, n_points=64,
              noise_sigma=0.0, epochs=30, seed=0)
    kw.update(over)
    return FilamentShapeRegressor(**kw)


def test_default_harmonics_mapping():
    assert DEFAULT_HARMONICS == {1: 8, 2: 16}
    assert FilamentShapeRegressor(layers=1)._config().n_harmonics == 8
    assert FilamentShapeRegressor(layers=2)._config().n_harmonics == 16
    assert FilamentShapeRegressor(n_harmonics=5, layers=2,
                                  latent_dim=16)._config().n_harmonics == 5
    with pytest.raises(DomainError):
        FilamentShapeRegressor(layers=3)._config()


def test_get_set_params_and_clone():
    est = _fast_regressor(epochs=77)
    params = est.get_params()
    assert params["epochs"] == 77
    assert params["layers"] == 1
    twin = clone(est)
    assert twin.get_params() == params
    est.set_params(epochs=5)
    assert est.get_params()["epochs"] == 5


def test_fit_with_explicit_validation(tiny_splits):
    Xtr, Ctr = tiny_splits["train"]
    Xva, Cva = tiny_splits["validation"]
    est = _fast_regressor().fit(Xtr, Ctr, validation=(Xva, Cva))
    assert est.model_.best_epoch > 0
    assert len(est.report_.train_loss) == 30
    F = est.predict(Xva)
    assert F.shape == (len(Xva), 7)


def test_fit_default_holdout(tiny_splits):
    Xtr, Ctr = tiny_splits["train"]
    est = _fast_regressor(validation_fraction=0.2).fit(Xtr, Ctr)
    assert np.isfinite(est.model_.best_validation_error)
    # holdout is seeded, so a refit reproduces the same model
    est2 = _fast_regressor(validation_fraction=0.2).fit(Xtr, Ctr)
    assert est2.model_.best_validation_error == est.model_.best_validation_error


def test_predict_shapes_and_contours(tiny_splits):
    Xtr, Ctr = tiny_splits["train"]
    Xva, Cva = tiny_splits["validation"]
    est = _fast_regressor().fit(Xtr, Ctr, validation=(Xva, Cva))
    shapes = est.predict_shapes(Xva[:2])
    assert len(shapes) == 2
    assert shapes[0].n_harmonics == 4
    contours = est.predict_contours(Xva[:2], n_points=100)
    assert contours[0].shape == (100, 2)
    # contours are the sampled shapes
    from beadshape.fourier import sample
    assert np.allclose(contours[0], sample(shapes[0], 100).points)


def test_score_is_negative_error(tiny_splits):
    Xtr, Ctr = tiny_splits["train"]
    Xva, Cva = tiny_splits["validation"]
    est = _fast_regressor().fit(Xtr, Ctr, validation=(Xva, Cva))
    s = est.score(Xva, Cva)
    assert s <= 0.0
    # reproducing the training data scores no worse than shuffled labels
    assert est.score(Xtr, Ctr) > -1.0


def test_unfitted_errors():
    est = _fast_regressor()
    with pytest.raises(DomainError, match="not fitted"):
        est.predict(np.zeros((1, 5)))
    with pytest.raises(DomainError, match="not fitted"):
        est.score(np.zeros((1, 5)), [])


def test_fit_shape_validation(tiny_splits):
    Xtr, Ctr = tiny_splits["train"]
    est = _fast_regressor()
    with pytest.raises(DomainError):
        est.fit(Xtr[:, :4], Ctr)
    with pytest.raises(DomainError):
        est.fit(Xtr, Ctr[:-1])
    with pytest.raises(DomainError):
        _fast_regressor(validation_fraction=1.5).fit(Xtr, Ctr)


def test_predict_shape_validation(tiny_splits):
    Xtr, Ctr = tiny_splits["train"]
    Xva, Cva = tiny_splits["validation"]
    est = _fast_regressor().fit(Xtr, Ctr, validation=(Xva, Cva))
    with pytest.raises(DomainError):
        est.predict(np.zeros((2, 3)))
