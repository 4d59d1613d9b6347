"""Estimator-style wrappers for batch work on point arrays.

:class:`ModelTransformer` converts rows between hyperbolic models and
:class:`DirichletDomain` fits a fundamental domain to a set of generators,
then classifies or folds points.  Both follow the scikit-learn conventions
(constructor stores parameters, ``fit`` returns ``self``, fitted state ends in
an underscore) so they compose with pipelines and ``clone``.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_array, check_is_fitted

from . import actions, models

MODELS = ("hyperboloid", "klein", "poincare")


def check_hyperboloid_points(X, tol: float = models.EPS_MODEL) -> np.ndarray:
    """Validate rows as points of the upper hyperboloid (relative tolerance)."""
    X = check_array(X, dtype=np.float64)
    if X.shape[1] < 2:
        raise ValueError("hyperboloid points need at least 2 coordinates")
    q = models.lorentz_dot(X, X)
    scale = np.maximum(1.0, X[:, 0] ** 2)
    if np.any(X[:, 0] <= 0) or np.any(np.abs(q - 1.0) > tol * scale):
        raise ValueError("rows must satisfy v.v = 1 with v0 > 0")
    return X


def check_ball_points(X, closed: bool = False) -> np.ndarray:
    """Validate rows as points of the open (or closed) unit ball."""
    X = check_array(X, dtype=np.float64)
    r2 = np.sum(X * X, axis=1)
    if np.any(r2 > 1.0) or (not closed and np.any(r2 >= 1.0)):
        raise ValueError("rows must lie in the open unit ball" if not closed else "rows must lie in the closed unit ball")
    return X


def check_model_points(X, model: str) -> np.ndarray:
    if model not in MODELS:
        raise ValueError(f"unknown model {model!r}; expected one of {MODELS}")
    return check_hyperboloid_points(X) if model == "hyperboloid" else check_ball_points(X)


def _to_hyperboloid(X: np.ndarray, model: str) -> np.ndarray:
    if model == "klein":
        return models.klein_to_hyperboloid(X)
    if model == "poincare":
        return models.poincare_to_hyperboloid(X)
    return X


def _from_hyperboloid(V: np.ndarray, model: str) -> np.ndarray:
    if model == "klein":
        return models.hyperboloid_to_klein(V)
    if model == "poincare":
        return models.hyperboloid_to_poincare(V)
    return V


class ModelTransformer(TransformerMixin, BaseEstimator):
    """Convert rows from one model of hyperbolic space to another.

    Parameters
    ----------
    source, target : {"hyperboloid", "klein", "poincare"}
    """

    def __init__(self, source: str = "hyperboloid", target: str = "klein"):
        self.source = source
        self.target = target

    def fit(self, X, y=None):
        if self.target not in MODELS:
            raise ValueError(f"unknown model {self.target!r}")
        X = check_model_points(X, self.source)
        self.n_features_in_ = X.shape[1]
        self.dimension_ = X.shape[1] - (1 if self.source == "hyperboloid" else 0)
        return self

    def transform(self, X):
        check_is_fitted(self, "dimension_")
        X = check_model_points(X, self.source)
        if X.shape[1] != self.n_features_in_:
            raise ValueError(f"expected {self.n_features_in_} columns, got {X.shape[1]}")
        return _from_hyperboloid(_to_hyperboloid(X, self.source), self.target)

    def inverse_transform(self, X):
        check_is_fitted(self, "dimension_")
        X = check_model_points(X, self.target)
        return _from_hyperboloid(_to_hyperboloid(X, self.target), self.source)


class DirichletDomain(BaseEstimator):
    """Dirichlet domain of the group generated by ``generators`` (Lorentz matrices).

    ``fit`` enumerates the word ball of radius ``word_length`` and builds the
    half-space description in Klein coordinates.  ``predict`` returns domain
    membership for hyperboloid rows; ``transform`` moves each row to its
    representative ``g*^-1 x`` with ``g* a`` the nearest enumerated translate.
    """

    def __init__(self, generators=None, word_length: int = 6, basepoint=None, tol: float = 1e-9):
        self.generators = generators
        self.word_length = word_length
        self.basepoint = basepoint
        self.tol = tol

    def fit(self, X=None, y=None):
        if not self.generators:
            raise ValueError("at least one generator is required")
        gens = [models.Isometry(np.asarray(g, dtype=float)) for g in self.generators]
        n = gens[0].n
        a = models.HyperboloidPoint.origin(n).v if self.basepoint is None else np.asarray(self.basepoint, float)
        self.basepoint_ = check_hyperboloid_points(a[None, :])[0]
        self.elements_ = actions.word_ball(gens, self.word_length)
        self.polyhedron_ = actions.dirichlet_domain(self.elements_, self.basepoint_)
        self.halfspaces_ = self.polyhedron_.halfspaces
        self.n_features_in_ = n + 1
        return self

    def predict(self, X):
        check_is_fitted(self, "polyhedron_")
        X = check_hyperboloid_points(X)
        return self.polyhedron_.contains(models.hyperboloid_to_klein(X), tol=self.tol)

    def transform(self, X):
        check_is_fitted(self, "polyhedron_")
        X = check_hyperboloid_points(X)
        inv = self.elements_.inverse_matrices()
        cs = actions.orbit(self.elements_, self.basepoint_)
        idx = np.argmin(X @ (cs * models.lorentz_gram(X.shape[1] - 1).diagonal()).T, axis=1)
        return np.einsum("kij,kj->ki", inv[idx], X)

    def nearest_element_words(self, X) -> list[tuple[int, ...]]:
        check_is_fitted(self, "polyhedron_")
        X = check_hyperboloid_points(X)
        return [self.elements_.words[actions.nearest_translate(self.elements_, x, self.basepoint_)] for x in X]
