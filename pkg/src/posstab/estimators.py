"""scikit-learn style wrappers. The "sample" is a single square matrix."""
from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from ._engine import SolverOptions
from ._validation import check_matrix
from .hurwitz import closest_hurwitz_unstable, hurwitz_stabilize
from .schur import closest_unstable, stabilize

_STABILITY = ("schur", "hurwitz")


def _check_stability(stability):
    if stability not in _STABILITY:
        raise ValueError(f"stability must be one of {_STABILITY}, got {stability!r}")


class NearestStableMatrix(TransformerMixin, BaseEstimator):
    """Locally closest stable non-negative (``'schur'``) or Metzler (``'hurwitz'``) matrix.

    After ``fit(A)``: ``matrix_``, ``distance_``, ``n_iter_``,
    ``certificate_``, ``classification_`` and ``result_``.
    ``transform(A)`` solves for the given matrix without touching the fit.
    """

    def __init__(self, stability="schur", tol=1e-9, max_iter=None, record_iterates=False):
        self.stability = stability
        self.tol = tol
        self.max_iter = max_iter
        self.record_iterates = record_iterates

    def _solve(self, A):
        _check_stability(self.stability)
        opts = SolverOptions(tol=self.tol, max_iter=self.max_iter,
                             record_iterates=self.record_iterates)
        A = check_matrix(A)
        return stabilize(A, opts) if self.stability == "schur" else hurwitz_stabilize(A, opts)

    def fit(self, X, y=None):
        res = self._solve(X)
        self.result_ = res
        self.matrix_ = res.X
        self.distance_ = res.distance
        self.n_iter_ = res.iterations
        self.certificate_ = res.certificate
        self.classification_ = res.classification
        self.n_features_in_ = res.X.shape[1]
        return self

    def transform(self, X):
        check_is_fitted(self, "matrix_")
        return self._solve(X).X


class NearestUnstableMatrix(TransformerMixin, BaseEstimator):
    """Closest matrix on the stability boundary, by the rank-one formula."""

    def __init__(self, stability="schur"):
        self.stability = stability

    def _solve(self, A):
        _check_stability(self.stability)
        A = check_matrix(A)
        return closest_unstable(A) if self.stability == "schur" else closest_hurwitz_unstable(A)

    def fit(self, X, y=None):
        res = self._solve(X)
        self.result_ = res
        self.matrix_ = res.X
        self.distance_ = float(res.r)
        self.n_features_in_ = res.X.shape[1]
        return self

    def transform(self, X):
        check_is_fitted(self, "matrix_")
        return np.asarray(self._solve(X).X)
