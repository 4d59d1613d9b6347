import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError
from sklearn.pipeline import make_pipeline

from kltgeom import models as M
from kltgeom.estimators import (
    DirichletDomain,
    ModelTransformer,
    check_ball_points,
    check_hyperboloid_points,
)

RNG = np.random.default_rng(21)
X = M.random_hyperboloid_points(2, 300, RNG, max_radius=4.0)
BOOST = M.boost(2, 2.0).m
TRANSVERSE = M.boost(2, 2.0, axis=2).m


@pytest.mark.parametrize("target", ["klein", "poincare", "hyperboloid"])
def test_model_transformer_roundtrip(target):
    t = ModelTransformer("hyperboloid", target).fit(X)
    # Klein coordinates lose digits near the boundary, so compare relative to the time coordinate
    err = np.abs(t.inverse_transform(t.transform(X)) - X) / X[:, :1]
    assert err.max() <= 1e-12


def test_model_transformer_pipeline_composes():
    pipe = make_pipeline(ModelTransformer("hyperboloid", "klein"), ModelTransformer("klein", "poincare"))
    direct = ModelTransformer("hyperboloid", "poincare").fit(X).transform(X)
    assert np.allclose(pipe.fit_transform(X), direct, atol=1e-13)


def test_model_transformer_params_and_validation():
    t = ModelTransformer(source="klein", target="poincare")
    assert t.get_params() == {"source": "klein", "target": "poincare"}
    assert clone(t).get_params() == t.get_params()
    with pytest.raises(NotFittedError):
        t.transform([[0.1, 0.2]])
    with pytest.raises(ValueError):
        t.fit([[1.0, 0.0]])
    with pytest.raises(ValueError):
        ModelTransformer("klein", "upper-half-plane").fit([[0.1, 0.2]])


def test_validation_helpers():
    assert check_hyperboloid_points(X).shape == X.shape
    with pytest.raises(ValueError):
        check_hyperboloid_points([[2.0, 0.0, 0.0]])
    with pytest.raises(ValueError):
        check_hyperboloid_points([[np.nan, 0.0, 0.0]])
    assert check_ball_points([[1.0, 0.0]], closed=True).shape == (1, 2)
    with pytest.raises(ValueError):
        check_ball_points([[1.0, 0.0]])


def test_dirichlet_estimator_slab():
    est = DirichletDomain([BOOST], word_length=4).fit()
    assert len(est.halfspaces_) == 2
    folded = est.transform(X)
    assert est.predict(folded).all()
    # folding preserves the distance to the nearest orbit point of the basepoint
    assert np.allclose(M.lorentz_dot(folded, folded), 1.0)


def test_dirichlet_estimator_two_generators():
    est = DirichletDomain([BOOST, TRANSVERSE], word_length=3).fit()
    assert len(est.halfspaces_) == 4
    assert est.predict(est.transform(X)).all()
    words = est.nearest_element_words(X[:5])
    assert all(isinstance(w, tuple) for w in words)


def test_dirichlet_estimator_clone_and_errors():
    est = DirichletDomain([BOOST], word_length=2, tol=1e-8)
    params = clone(est).get_params()
    assert params["word_length"] == 2 and params["tol"] == 1e-8
    with pytest.raises(NotFittedError):
        est.predict(X)
    with pytest.raises(ValueError):
        DirichletDomain([]).fit()
