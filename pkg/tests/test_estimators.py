import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError

from posstab import NearestStableMatrix, NearestUnstableMatrix


def test_stable_estimator_fit_transform():
    A = np.array([[0.6, 0.4, 0.1], [0.5, 0.5, 0.3], [0.1, 0.1, 0.7]])
    est = NearestStableMatrix().fit(A)
    assert est.distance_ == pytest.approx(0.0903, abs=5e-4)
    assert est.classification_ == "positive_global"
    assert est.certificate_.accepted
    np.testing.assert_array_equal(est.transform(A), est.matrix_)
    np.testing.assert_array_equal(clone(est).fit_transform(A), est.matrix_)


def test_hurwitz_estimator():
    A = np.array([[0.5, 1.0], [1.0, -1.0]])
    est = NearestStableMatrix(stability="hurwitz").fit(A)
    assert np.max(np.linalg.eigvals(est.matrix_).real) <= 1e-8


def test_unstable_estimator():
    A = np.diag([0.5, 0.2])
    est = NearestUnstableMatrix().fit(A)
    assert est.distance_ == pytest.approx(0.5)
    est = NearestUnstableMatrix(stability="hurwitz").fit(-np.eye(2))
    assert est.distance_ == pytest.approx(1.0)


def test_estimator_errors():
    with pytest.raises(NotFittedError):
        NearestStableMatrix().transform(np.eye(2))
    with pytest.raises(ValueError):
        NearestStableMatrix(stability="other").fit(np.eye(2))
    assert NearestStableMatrix(tol=1e-6).get_params()["tol"] == 1e-6
