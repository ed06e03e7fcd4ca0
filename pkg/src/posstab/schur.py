"""Nearest stable and nearest unstable non-negative matrices (spectral radius)."""
from __future__ import annotations

import numpy as np

from ._engine import (SCHUR, BlockCertificate, DestabResult, SolverOptions,
                      StabilizeResult, StationarityCertificate, TraceStep,
                      closest_unstable_generic, inner_relax_generic,
                      optimize_cyclic_weights, positive_candidate_generic,
                      stabilize_generic, verify_generic)
from ._validation import check_matrix

__all__ = [
    "BlockCertificate", "DestabResult", "SolverOptions", "StabilizeResult",
    "StationarityCertificate", "TraceStep", "closest_unstable", "inner_relax",
    "optimize_cyclic_weights", "positive_candidate", "stabilize", "verify_stationary",
]


def closest_unstable(A, eig_tol=None):
    """Closest matrix with spectral radius one to a non-negative ``A`` with ``rho(A) < 1``.

    With ``G = A - I`` and ``v`` the smallest eigenvector of ``G^T G``, the
    answer is ``X = A + r u v^T`` where ``r = ||G v||`` and ``u = -G v / r``.
    Raises ``PreconditionError`` when ``rho(A) >= 1``.
    """
    A = check_matrix(A, nonnegative=True)
    kw = {} if eig_tol is None else {"eig_tol": eig_tol}
    return closest_unstable_generic(A, SCHUR, **kw)


def positive_candidate(A, cert_tol=1e-6):
    """Rank-one stabilizer ``A - r u v^T``, or ``None`` if it leaves the non-negative cone.

    When it exists it is the global minimizer.
    """
    A = check_matrix(A, nonnegative=True)
    return positive_candidate_generic(A, SCHUR, cert_tol)


def inner_relax(A, X0, opts=None):
    """Run the alternating row/column relaxation from ``X0``.

    Returns ``(X, reduce, trace)``. ``reduce`` is True when a leading
    eigenvector of the iterate develops a zero entry.
    """
    A = check_matrix(A, nonnegative=True)
    X0 = check_matrix(X0, name="X0", nonnegative=True)
    opts = opts or SolverOptions()
    X, status, run = inner_relax_generic(A, X0, SCHUR, opts)
    return X, status.reduce, run.trace


def stabilize(A, opts=None):
    """Locally closest non-negative matrix with spectral radius at most one.

    Negative entries of ``A`` are clipped first; the reported distance is to
    the original ``A``.
    """
    A = check_matrix(A)
    return stabilize_generic(A, SCHUR, opts or SolverOptions())


def verify_stationary(X, A, cert_tol=1e-6, mode="stabilize"):
    """Blockwise first-order check of ``X`` as a solution for ``A``.

    ``mode='destabilize'`` checks ``X - A = r u v^T`` with ``u, v`` the leading
    eigenvectors of ``X`` instead.
    """
    X = check_matrix(X, name="X")
    A = check_matrix(A)
    if mode not in ("stabilize", "destabilize"):
        raise ValueError("mode must be 'stabilize' or 'destabilize'")
    return verify_generic(X, np.maximum(A, 0.0), SCHUR, cert_tol, mode=mode)
