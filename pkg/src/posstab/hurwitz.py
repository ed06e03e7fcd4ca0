"""Hurwitz (spectral abscissa) versions for Metzler matrices."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from ._engine import (HURWITZ, SolverOptions, StationarityCertificate,
                      closest_unstable_generic, stabilize_generic,
                      verify_generic)
from ._validation import check_matrix
from .matcore import metzler_projection
from .spectral import spectral_abscissa


@dataclass
class HurwitzResult:
    X: np.ndarray
    distance: float
    alpha: float
    certificate: Optional[StationarityCertificate]
    iterations: int = 0
    trace: list = None
    classification: str = ""
    r: float = 0.0
    u: Optional[np.ndarray] = None
    v: Optional[np.ndarray] = None
    flags: tuple = ()

    @property
    def distance_squared(self):
        return self.distance ** 2


def closest_hurwitz_unstable(A, eig_tol=None):
    """Closest Metzler matrix with spectral abscissa zero, for Hurwitz stable Metzler ``A``.

    ``X = A + r u v^T`` with ``r = sigma_min(A)`` and ``u, v`` the singular pair.
    """
    A = check_matrix(A, metzler=True)
    kw = {} if eig_tol is None else {"eig_tol": eig_tol}
    res = closest_unstable_generic(A, HURWITZ, **kw)
    cert = verify_generic(res.X, A, HURWITZ, mode="destabilize")
    return HurwitzResult(res.X, float(np.linalg.norm(res.X - A)), spectral_abscissa(res.X),
                         cert, r=res.r, u=res.u, v=res.v, flags=res.flags)


def hurwitz_stabilize(A, opts=None):
    """Locally closest Metzler matrix with spectral abscissa at most zero.

    Negative off-diagonal entries are clipped first; the reported distance
    is to the original ``A``.
    """
    A = check_matrix(A)
    res = stabilize_generic(A, HURWITZ, opts or SolverOptions())
    return HurwitzResult(res.X, res.distance, spectral_abscissa(res.X), res.certificate,
                         res.iterations, res.trace, res.classification, res.certificate.r,
                         res.certificate.u, res.certificate.v, res.flags)


def verify_hurwitz_stationary(X, A, cert_tol=1e-6, mode="stabilize"):
    X = check_matrix(X, name="X")
    A = check_matrix(A)
    return verify_generic(X, metzler_projection(A), HURWITZ, cert_tol, mode=mode)
