"""Projection onto ``{x : (x, v) <= cap, x >= 0}`` by breakpoint search."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

QP_TOL = 1e-12


@dataclass(frozen=True)
class RowQPSolution:
    x: np.ndarray
    lam: float
    active_zero_set: tuple


def _phi_root(a, v, cap, free):
    """Smallest ``lam >= 0`` with ``(x(lam), v) <= cap``.

    ``x(lam) = max(a - lam v, 0)`` except at ``free`` where no clamp applies.
    The function is piecewise linear and decreasing; its kinks sit at
    ``a_j / v_j``.
    """
    clamped = np.ones(a.shape[0], dtype=bool)
    sv0 = sv20 = 0.0
    if free is not None:
        clamped[free] = False
        sv0 = float(np.sum(v[free] * a[free]))
        sv20 = float(np.sum(v[free] ** 2))
    idx = np.flatnonzero(clamped & (a > 0))
    t = a[idx] / v[idx]
    order = np.argsort(-t, kind="stable")
    idx, t = idx[order], t[order]
    sv = sv0 + np.concatenate(([0.0], np.cumsum(v[idx] * a[idx])))
    sv2 = sv20 + np.concatenate(([0.0], np.cumsum(v[idx] ** 2)))
    nxt = np.concatenate((t, [0.0]))
    with np.errstate(divide="ignore", invalid="ignore"):
        lam = np.where(sv2 > 0, (sv - cap) / sv2, np.inf)
    ok = (sv2 > 0) & (lam >= nxt)
    k = int(np.argmax(ok))
    return float(max(lam[k], 0.0))


def project_row(a, v, cap, free=None, qp_tol=QP_TOL):
    """Minimize ``||x - a||^2`` subject to ``(x, v) <= cap`` and ``x >= 0``.

    ``free`` names coordinates exempt from the sign constraint (an index or an
    index array; the diagonal entry of a Metzler row). Requires ``v > 0``; ``cap >= 0`` unless a free
    coordinate makes the constraint reachable.
    """
    a = np.asarray(a, dtype=float)
    v = np.asarray(v, dtype=float)
    if a.shape != v.shape or a.ndim != 1:
        raise ValueError("a and v must be vectors of equal length")
    if not np.all(np.isfinite(a)) or not np.isfinite(cap):
        raise ValueError("a and cap must be finite")
    if np.any(v <= 0):
        raise ValueError("project_row requires a strictly positive v")
    if free is None and cap < 0:
        raise ValueError("constraint (x, v) <= cap with cap < 0 is infeasible for x >= 0")

    x = np.maximum(a, 0.0)
    if free is not None:
        x[free] = a[free]
    if x @ v <= cap:
        lam = 0.0
    else:
        lam = _phi_root(a, v, cap, free)
        x = np.maximum(a - lam * v, 0.0)
        if free is not None:
            x[free] = a[free] - lam * v[free]
    zeros = np.flatnonzero(x == 0.0)
    if free is not None:
        zeros = np.setdiff1d(zeros, free)
    return RowQPSolution(x, lam, tuple(int(i) for i in zeros))


def interior_formula(a, v, cap):
    """Closed form ``a - ((a, v) - cap) / ||v||^2 * v`` when the constraint
    binds and no coordinate clamps; ``a`` itself when it is slack."""
    a = np.asarray(a, dtype=float)
    v = np.asarray(v, dtype=float)
    excess = a @ v - cap
    if excess <= 0:
        return a.copy()
    x = a - excess / (v @ v) * v
    if np.any(x <= 0):
        raise ValueError("interior formula does not apply: a coordinate would clamp")
    return x


def project_rows(A, V, caps, free_diagonal=False, qp_tol=QP_TOL, multipliers=False):
    """Row-wise projection ``X[i] = project_row(A[i], v, caps[i])``.

    ``V`` is the shared vector. With ``free_diagonal`` the entry ``X[i, i]``
    is sign-free. With ``multipliers`` the vector of row multipliers is
    returned as well.
    """
    A = np.asarray(A, dtype=float)
    X = np.empty_like(A)
    lam = np.empty(A.shape[0])
    for i in range(A.shape[0]):
        sol = project_row(A[i], V, caps[i], free=i if free_diagonal else None, qp_tol=qp_tol)
        X[i] = sol.x
        lam[i] = sol.lam
    return (X, lam) if multipliers else X
