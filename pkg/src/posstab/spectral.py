"""Leading eigenpairs of non-negative and Metzler matrices, smallest eigenpairs of
symmetric PSD matrices, and small singular values."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ._validation import ConvergenceError, check_matrix

EIG_TOL = 1e-10


@dataclass(frozen=True)
class SpectralTriple:
    """Leading eigenvalue ``rho`` with unit non-negative right/left eigenvectors."""
    rho: float
    v: np.ndarray
    u: np.ndarray
    multiplicity: int = 1


@dataclass(frozen=True)
class SmallestEigPair:
    mu: float
    v: np.ndarray
    multiplicity: int = 1
    nonneg: bool = True


def spectral_radius(X):
    X = np.asarray(X, dtype=float)
    return float(np.max(np.abs(np.linalg.eigvals(X)))) if X.size else 0.0


def spectral_abscissa(X):
    X = np.asarray(X, dtype=float)
    return float(np.max(np.linalg.eigvals(X).real)) if X.size else -math.inf


def _orient(x):
    s = x.sum()
    if abs(s) <= 1e-12 * np.abs(x).sum():
        s = x[np.argmax(np.abs(x))]
    return x if s >= 0 else -x


def _tie_break(basis):
    """Unit vector of the column span of ``basis`` closest to the all-ones direction."""
    if basis.shape[1] == 1:
        x = basis[:, 0]
    else:
        x = basis @ (basis.T @ np.ones(basis.shape[0]))
        if np.linalg.norm(x) < 1e-12:
            x = basis[:, 0]
    x = _orient(x)
    return x / np.linalg.norm(x)


def _clamp_unit(x):
    x = np.maximum(x, 0.0)
    n = np.linalg.norm(x)
    return x / n if n > 0 else x


def _power_iteration(X, eig_tol, max_iter):
    d = X.shape[0]
    shifted = X + (1.0 + max(0.0, float(np.max(np.diag(X))))) * np.eye(d)
    x = np.full(d, 1.0 / math.sqrt(d))
    for _ in range(max_iter):
        y = shifted @ x
        y /= np.linalg.norm(y)
        if np.linalg.norm(y - x) < eig_tol:
            return y
        x = y
    raise ConvergenceError("power iteration did not converge")


def perron_triple(X, eig_tol=EIG_TOL, max_iter=None):
    """Spectral radius and leading eigenvectors of a non-negative matrix.

    The Perron root is the eigenvalue of largest real part. Both eigenvectors
    are read off one SVD of ``X - rho I``; when the null space is more than
    one-dimensional the vector nearest to the all-ones direction is returned,
    which is also the limit of power iteration started from the all-ones
    vector. Power iteration on ``X + cI`` is the fallback when this fails.
    """
    X = check_matrix(X, name="X", nonnegative=True, tol=eig_tol)
    d = X.shape[0]
    max_iter = max_iter or 100 * d + 10000
    rho = max(0.0, float(np.max(np.linalg.eigvals(X).real)))
    U, S, Vt = np.linalg.svd(X - rho * np.eye(d))
    k = max(1, int(np.sum(S <= 1e-9 * max(1.0, S[0]))))
    v = _tie_break(Vt[-k:].T)
    u = _tie_break(U[:, -k:])
    tol = eig_tol * max(1.0, rho)

    def ok(x, M):
        return x.min() >= -1e-8 and np.linalg.norm(M @ x - rho * x) <= tol

    if not ok(v, X):
        v = _power_iteration(X, eig_tol * 1e-2, max_iter)
    if not ok(u, X.T):
        u = _power_iteration(X.T, eig_tol * 1e-2, max_iter)
    v, u = _clamp_unit(v), _clamp_unit(u)
    if np.linalg.norm(X @ v - rho * v) > tol or np.linalg.norm(X.T @ u - rho * u) > tol:
        raise ConvergenceError("leading eigenvectors fail the residual check")
    return SpectralTriple(rho, v, u, k)


def spectral_abscissa_triple(X, eig_tol=EIG_TOL, max_iter=None):
    """Spectral abscissa and leading eigenvectors of a Metzler matrix (shifted Perron)."""
    X = check_matrix(X, name="X", metzler=True, tol=eig_tol)
    s = 1.0 + float(np.max(np.abs(np.diag(X))))
    t = perron_triple(X + s * np.eye(X.shape[0]), eig_tol, max_iter)
    return SpectralTriple(t.rho - s, t.v, t.u, t.multiplicity)


def smallest_sym_eigpair(M, prefer_nonneg=True, eig_tol=EIG_TOL):
    """Smallest eigenvalue of a symmetric PSD matrix and a unit eigenvector.

    With ``prefer_nonneg`` the returned vector is non-negative whenever the
    eigenspace contains one and the all-ones direction finds it; otherwise the
    result carries ``nonneg=False`` rather than raising.
    """
    M = check_matrix(M, name="M")
    if np.abs(M - M.T).max(initial=0.0) > 1e-12 * max(1.0, np.abs(M).max()):
        raise ValueError("M must be symmetric")
    w, V = np.linalg.eigh(M)
    k = int(np.sum(w - w[0] <= 1e-9 * max(1.0, abs(w[-1]))))
    v = _tie_break(V[:, :k])
    mu = max(0.0, float(w[0]))
    nonneg = bool(v.min() >= -1e-8)
    if prefer_nonneg and nonneg:
        clamped = _clamp_unit(v)
        if np.linalg.norm(M @ clamped - mu * clamped) <= max(eig_tol, 1e-9 * abs(w[-1])):
            v = clamped
        else:
            nonneg = False
    return SmallestEigPair(mu, v, k, nonneg)


def two_smallest_singular_values(B):
    B = check_matrix(B, name="B")
    s = np.sort(np.linalg.svd(B, compute_uv=False))
    return float(s[0]), float(s[1]) if s.size > 1 else math.inf
