"""Input validation helpers shared by the functional API and the estimators."""
from __future__ import annotations

import numpy as np
from sklearn.utils import check_array


class PreconditionError(ValueError):
    """Raised when an input is valid data but violates an algorithmic precondition
    (for example a spectral radius on the wrong side of the stability boundary)."""


class ConvergenceError(RuntimeError):
    pass


def check_matrix(A, *, name="A", nonnegative=False, metzler=False, tol=0.0):
    """Return ``A`` as a finite, square, float64 ndarray.

    ``nonnegative`` and ``metzler`` additionally check the sign pattern up to
    ``-tol``; they never modify the data.
    """
    A = check_array(A, dtype=np.float64, ensure_2d=True, ensure_all_finite=True,
                    input_name=name, copy=False)
    if A.shape[0] != A.shape[1]:
        raise ValueError(f"{name} must be square, got shape {A.shape}")
    if nonnegative and A.size and A.min() < -tol:
        raise PreconditionError(f"{name} must be entrywise non-negative")
    if metzler and A.shape[0] > 1:
        off = A[~np.eye(A.shape[0], dtype=bool)]
        if off.min() < -tol:
            raise PreconditionError(f"{name} must be Metzler (non-negative off the diagonal)")
    return A


def check_same_shape(X, A):
    if X.shape != A.shape:
        raise ValueError(f"dimension mismatch: {X.shape} vs {A.shape}")


def check_permutation(perm, d):
    perm = np.asarray(perm)
    if perm.shape != (d,) or not np.array_equal(np.sort(perm), np.arange(d)):
        raise ValueError(f"not a permutation of 0..{d - 1}: {perm!r}")
    return perm.astype(np.intp)
