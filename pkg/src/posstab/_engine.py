"""Shared machinery for the Schur and Hurwitz nearness problems.

Both problems have the same shape once written in terms of the shifted matrix
``G = A - level * I``: the leading eigenvalue of ``X`` must not exceed
``level`` (1 for the spectral radius, 0 for the spectral abscissa), and the
sign constraint applies on a mask (every entry, or off-diagonal entries only).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy.optimize import brentq, minimize

from ._validation import PreconditionError
from .matcore import ZERO_TOL
from .rowqp import QP_TOL, project_row, project_rows
from .spectral import (EIG_TOL, perron_triple, smallest_sym_eigpair,
                       spectral_abscissa, spectral_abscissa_triple,
                       spectral_radius)
from .structure import (BlockStructure, CyclicPartition, cyclic_block_views,
                        frobenius_normal_form, is_primitive,
                        strongly_connected_components)


@dataclass(frozen=True)
class Geometry:
    name: str
    level: float
    free_diagonal: bool

    def leading(self, X):
        """Leading eigenvalue, taken blockwise over the Frobenius form.

        Equal leading eigenvalues in coupled diagonal blocks form a defective
        eigenvalue of the whole matrix, which dense eigensolvers resolve only
        to about the cube root of machine precision.
        """
        if X.shape[0] == 0:
            return -math.inf
        f = spectral_radius if self.name == "schur" else spectral_abscissa
        st = frobenius_normal_form(X, 0.0, ignore_diagonal=self.free_diagonal)
        if st.m == 1:
            return f(X)
        return max(f(X[np.ix_(b, b)]) for b in st.blocks)

    def triple(self, X, eig_tol=EIG_TOL):
        if self.name == "schur":
            return perron_triple(X, eig_tol)
        return spectral_abscissa_triple(X, eig_tol)

    def mask(self, n):
        m = np.ones((n, n), dtype=bool)
        if self.free_diagonal:
            np.fill_diagonal(m, False)
        return m

    def caps(self, vec):
        return self.level * vec

    def shift(self, A):
        return A - self.level * np.eye(A.shape[0])

    def start(self, A):
        """Rescaled copy of ``A`` with leading eigenvalue exactly ``level``."""
        if self.name == "schur":
            return A / spectral_radius(A)
        return A - spectral_abscissa(A) * np.eye(A.shape[0])

    def structure(self, X, zero_tol=ZERO_TOL):
        return frobenius_normal_form(X, zero_tol, ignore_diagonal=self.free_diagonal)


SCHUR = Geometry("schur", 1.0, False)
HURWITZ = Geometry("hurwitz", 0.0, True)


@dataclass
class SolverOptions:
    """Tolerances and limits for the stabilization iteration.

    ``max_iter`` defaults to ``10 d + 500`` relaxation steps per inner run.
    ``X0`` is used when ``init_strategy == 'custom'``.
    """
    tol: float = 1e-9
    max_iter: Optional[int] = None
    eig_tol: float = EIG_TOL
    qp_tol: float = QP_TOL
    cert_tol: float = 1e-6
    zero_tol: float = ZERO_TOL
    reduce_tol: float = 1e-8
    init_strategy: str = "scale_A"
    X0: Optional[np.ndarray] = None
    record_iterates: bool = False
    max_escapes: int = 10
    max_descents: int = 50
    near_reduce_tol: float = 5e-2
    checkpoint: int = 50
    accelerate: bool = True

    def __post_init__(self):
        for name in ("tol", "eig_tol", "qp_tol", "cert_tol", "zero_tol", "reduce_tol"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")
        if self.max_iter is not None and self.max_iter < 1:
            raise ValueError("max_iter must be at least 1")
        if self.init_strategy not in ("scale_A", "custom"):
            raise ValueError("init_strategy must be 'scale_A' or 'custom'")
        if self.init_strategy == "custom" and self.X0 is None:
            raise ValueError("init_strategy='custom' needs X0")

    def k_max(self, d):
        return self.max_iter if self.max_iter is not None else 10 * d + 500


@dataclass(frozen=True)
class TraceStep:
    k: int
    distance: float
    reduce: bool
    kind: str
    X: Optional[np.ndarray] = None
    vec: Optional[np.ndarray] = None


@dataclass(frozen=True)
class DestabResult:
    X: np.ndarray
    r: float
    v: np.ndarray
    u: np.ndarray
    flags: tuple = ()


@dataclass(frozen=True)
class BlockCertificate:
    indices: np.ndarray
    status: str
    r: float = 0.0
    residual: float = 0.0
    u: Optional[np.ndarray] = None
    v: Optional[np.ndarray] = None


@dataclass
class StationarityCertificate:
    accepted: bool
    reason: str
    r: float
    u: Optional[np.ndarray]
    v: Optional[np.ndarray]
    Lambda: np.ndarray
    blocks: list = field(default_factory=list)
    residual: float = 0.0

    @property
    def blockwise_status(self):
        return [b.status for b in self.blocks]

    def summary(self):
        return {
            "accepted": self.accepted,
            "reason": self.reason,
            "r": self.r,
            "residual": self.residual,
            "blocks": [{"indices": [int(i) for i in b.indices], "status": b.status,
                        "r": b.r, "residual": b.residual} for b in self.blocks],
        }


@dataclass
class StabilizeResult:
    X: np.ndarray
    distance: float
    iterations: int
    trace: list
    certificate: StationarityCertificate
    classification: str
    flags: tuple = ()

    @property
    def distance_squared(self):
        return self.distance ** 2

    @property
    def reduce_steps(self):
        return [s for s in self.trace if s.reduce]

    @property
    def first_reducible_distance(self):
        """Distance of the iterate on which the first reduction was triggered."""
        for i, s in enumerate(self.trace):
            if s.reduce and i > 0:
                return self.trace[i - 1].distance
        return None


# ---------------------------------------------------------------------------
# explicit formulas

def _rank_one_fit(A, geom, eig_tol):
    G = geom.shift(A)
    pair = smallest_sym_eigpair(G.T @ G, prefer_nonneg=True, eig_tol=eig_tol)
    return G, pair


def closest_unstable_generic(A, geom, eig_tol=EIG_TOL):
    """``X = A - G v v^T`` for the smallest eigenvector ``v`` of ``G^T G``."""
    lead = geom.leading(A)
    if not lead < geom.level:
        raise PreconditionError(f"leading eigenvalue {lead:.6g} is not below {geom.level:g}")
    G, pair = _rank_one_fit(A, geom, eig_tol)
    v = pair.v
    r = math.sqrt(pair.mu)
    flags = []
    if pair.multiplicity > 1:
        flags.append("multiple")
    if not pair.nonneg:
        flags.append("sign_indefinite")
    if r <= eig_tol:
        return DestabResult(A.copy(), 0.0, v, v.copy(), tuple(flags + ["boundary"]))
    u = -(G @ v) / r
    u = np.where(np.abs(u) < 1e-15, 0.0, u)
    X = A + r * np.outer(u, v)
    return DestabResult(X, r, v, u, tuple(flags))


def positive_candidate_generic(A, geom, cert_tol=1e-6, eig_tol=EIG_TOL):
    """Rank-one stabilizer ``X = A - G v v^T``; ``None`` unless ``u``, ``v`` and
    ``X`` satisfy the sign constraints."""
    lead = geom.leading(A)
    if not lead > geom.level:
        raise PreconditionError(f"leading eigenvalue {lead:.6g} does not exceed {geom.level:g}")
    G, pair = _rank_one_fit(A, geom, eig_tol)
    v = pair.v
    r = math.sqrt(pair.mu)
    if r <= eig_tol or not pair.nonneg:
        return None
    u = (G @ v) / r
    X = A - r * np.outer(u, v)
    tol = cert_tol * max(1.0, np.linalg.norm(A))
    if v.min() < -tol or u.min() < -tol:
        return None
    if X[geom.mask(A.shape[0])].min(initial=0.0) < -tol:
        return None
    X = np.where(geom.mask(A.shape[0]), np.maximum(X, 0.0), X)
    if geom.leading(X) > geom.level + tol:
        return None
    return DestabResult(X, r, v, np.maximum(u, 0.0))


# ---------------------------------------------------------------------------
# cyclic weights

def _weight_objective(s, n, c):
    return float(np.sum(n * s * s - 2 * c * s))


def _weights_for(lam, n, c, minus):
    disc = c * c - 4 * n * lam
    if np.any(disc < 0):
        return None
    root = np.sqrt(disc)
    s = np.where(minus, c - root, c + root) / (2 * n)
    return s if np.all(s > 0) else None


def optimal_weights(n, c):
    """Minimize ``sum n_m s_m^2 - 2 c_m s_m`` over ``s > 0`` with ``prod s = 1``.

    Stationary points satisfy ``n_m s_m^2 - c_m s_m + lam = 0`` for a common
    ``lam``. Each block takes the larger root, except possibly one block taking
    the smaller root; every such branch is scanned for roots of
    ``sum log s_m(lam)`` and the best candidate wins. Returns ``(s, ok)``.
    """
    n = np.asarray(n, dtype=float)
    c = np.asarray(c, dtype=float)
    r = n.size
    best = np.ones(r)
    best_val = _weight_objective(best, n, c)
    found = False
    pos = c > 0
    lam_hi = float(np.min(np.where(pos, c * c / (4 * n), 0.0)))
    scale = max(1.0, float(np.max(np.abs(c))), float(np.max(n)))
    offsets = np.concatenate(([0.0], np.geomspace(1e-14, 1e8, 600))) * scale
    branches = [np.zeros(r, dtype=bool)]
    for m in range(r):
        if pos[m]:
            b = np.zeros(r, dtype=bool)
            b[m] = True
            branches.append(b)
    for minus in branches:
        hi = lam_hi if not minus.any() else min(lam_hi, float(np.min(c[minus] ** 2 / (4 * n[minus]))))
        lo_bound = 0.0 if minus.any() else -math.inf

        def g(lam):
            s = _weights_for(lam, n, c, minus)
            return None if s is None else float(np.sum(np.log(s)))

        grid = [hi - o for o in offsets if hi - o > lo_bound]
        vals = [g(l) for l in grid]
        for (l0, g0), (l1, g1) in zip(zip(grid, vals), zip(grid[1:], vals[1:])):
            if g0 is None or g1 is None:
                continue
            if g0 == 0.0:
                lam = l0
            elif g0 * g1 < 0:
                lam = brentq(lambda l: g(l), l1, l0, xtol=1e-15 * scale, rtol=1e-15)
            else:
                continue
            s = _weights_for(lam, n, c, minus)
            if s is None:
                continue
            s = s / np.prod(s) ** (1.0 / r)
            val = _weight_objective(s, n, c)
            found = True
            if val < best_val:
                best, best_val = s, val
    return best, found


def optimize_cyclic_weights(X, A, part: CyclicPartition):
    """Rescale the cyclic blocks of ``X`` by weights with unit product.

    Returns ``(s, X_new, ok)``; ``ok`` is False when no stationary weight
    vector was found and unit weights were kept.
    """
    X = np.asarray(X, dtype=float)
    A = np.asarray(A, dtype=float)
    views = cyclic_block_views(X, part)
    rr = part.r
    n = np.array([np.sum(V * V) for V in views])
    c = np.array([np.sum(V * A[np.ix_(part.classes[(k + 1) % rr], part.classes[k])])
                  for k, V in enumerate(views)])
    if np.any(n <= 0):
        return np.ones(rr), X.copy(), False
    s, ok = optimal_weights(n, c)
    Xn = X.copy()
    for k in range(rr):
        rows, cols = part.classes[(k + 1) % rr], part.classes[k]
        Xn[np.ix_(rows, cols)] = s[k] * X[np.ix_(rows, cols)]
    return s, Xn, ok


def cyclic_products(X, A, part):
    """``(X^(m), X^(m) - A^(m))`` for each cyclic block; equal at optimal weights."""
    rr = part.r
    out = []
    for k in range(rr):
        ix = np.ix_(part.classes[(k + 1) % rr], part.classes[k])
        out.append(float(np.sum(X[ix] * (X[ix] - A[ix]))))
    return np.array(out)


# ---------------------------------------------------------------------------
# the iteration

@dataclass
class _RelaxStatus:
    reduce: bool = False
    which: str = ""
    vec: Optional[np.ndarray] = None
    maxed: bool = False
    steps: int = 0
    done: bool = False


class _Run:
    """Mutable state of one stabilization run, in the indices of ``A``."""

    def __init__(self, A, geom, opts: SolverOptions):
        self.A = A
        self.geom = geom
        self.opts = opts
        self.d = A.shape[0]
        self.X = A.copy()
        self.trace = []
        self.k = 0
        self.iterations = 0
        self.flags = set()
        # a split leaves an unrecorded intermediate; the next iterate carries the flag
        self.pending_reduce = None

    def distance(self):
        return float(np.linalg.norm(self.X - self.A))

    def record(self, kind, reduce=False, vec=None):
        keep = self.opts.record_iterates
        if self.pending_reduce is not None:
            reduce = True
            self.pending_reduce = None
        self.trace.append(TraceStep(self.k, self.distance(), reduce, kind,
                                    self.X.copy() if keep else None,
                                    None if vec is None or not keep else vec.copy()))
        self.k += 1

    def block(self, M, idx):
        return M[np.ix_(idx, idx)]

    # -- alternating relaxation ---------------------------------------------
    def _project(self, Ab, vec, rowwise):
        geom = self.geom
        caps = geom.caps(vec)
        if rowwise:
            return project_rows(Ab, vec, caps, geom.free_diagonal, self.opts.qp_tol)
        return project_rows(Ab.T, vec, caps, geom.free_diagonal, self.opts.qp_tol).T

    def relax(self, idx):
        """Alternate row and column projections on the block ``idx``."""
        geom, opts = self.geom, self.opts
        Ab = self.block(self.A, idx)
        Xb = self.block(self.X, idx)
        stalls = 0
        rowwise = True
        status = _RelaxStatus()
        for _ in range(opts.k_max(self.d)):
            t = geom.triple(Xb, opts.eig_tol)
            vec = t.v if rowwise else t.u
            if vec.min() <= opts.reduce_tol * vec.max():
                status.reduce, status.which, status.vec = True, "v" if rowwise else "u", vec
                return status
            Xn = self._project(Ab, vec, rowwise)
            delta = float(np.linalg.norm(Xn - Xb))
            Xb = Xn
            self.X[np.ix_(idx, idx)] = Xb
            self.iterations += 1
            status.steps += 1
            self.record("row" if rowwise else "col", vec=vec)
            rowwise = not rowwise
            stalls = stalls + 1 if delta < opts.tol else 0
            if stalls >= 2:
                return status
            if status.steps % opts.checkpoint == 0:
                if self.tentative_split(idx):
                    status.done = True
                    return status
                if opts.accelerate and self.polish(idx):
                    Xb = self.block(self.X, idx)
                    rowwise = False
                    stalls = 0
        if self.tentative_split(idx):
            status.done = True
            return status
        status.maxed = True
        self.flags.add("max_iter")
        return status

    def polish(self, idx):
        """Minimize the row-step distance over the eigenvector estimate.

        For a positive ``v`` the row step returns the closest matrix with
        ``X v <= level v``, and every feasible matrix is of this kind for its
        own Perron vector, so the problem is ``min_v F(v)`` with
        ``F(v) = ||A - X(v)||^2``. Its gradient is ``2 (X^T - level I) lam``
        with ``lam`` the row multipliers. The polished matrix is adopted only
        if it is strictly closer to ``A``.
        """
        geom, opts = self.geom, self.opts
        Ab = self.block(self.A, idx)
        Xb = self.block(self.X, idx)
        n = len(idx)
        if n < 2:
            return False
        v0 = geom.triple(Xb, opts.eig_tol).v
        if v0.min() <= 0:
            return False
        floor = 1e-12

        def fun(v):
            X, lam = project_rows(Ab, v, geom.caps(v), geom.free_diagonal, opts.qp_tol, True)
            val = float(np.sum((X - Ab) ** 2))
            grad = 2.0 * (X.T @ lam - geom.level * lam)
            return val, grad

        res = minimize(fun, v0 / v0.max(), jac=True, method="L-BFGS-B",
                       bounds=[(floor, None)] * n, options={"maxiter": 500, "ftol": 1e-15, "gtol": 1e-13})
        v = np.maximum(res.x, floor)
        v = v / np.linalg.norm(v)
        Xp = self._project(Ab, v, True)
        if np.linalg.norm(Xp - Ab) < np.linalg.norm(Xb - Ab) - opts.tol:
            self.X[np.ix_(idx, idx)] = Xp
            self.record("accelerate", vec=v)
            return True
        return False

    def clone(self):
        other = _Run(self.A, self.geom, self.opts)
        other.X = self.X.copy()
        other.k = self.k
        other.flags = set(self.flags)
        return other

    def tentative_split(self, idx, depth=0):
        """Split early when a leading eigenvector is drifting towards a zero entry.

        Close to a reducible limit the relaxation converges sublinearly. The
        split is carried out on a copy, and adopted only if the recursively
        solved copy ends strictly closer to ``A`` than the current iterate.
        """
        if len(idx) < 2:
            return False
        t = self.geom.triple(self.block(self.X, idx), self.opts.eig_tol)
        ratios = {"v": t.v.min() / t.v.max(), "u": t.u.min() / t.u.max()}
        which = min(ratios, key=ratios.get)
        if ratios[which] > self.opts.near_reduce_tol:
            return False
        vec = t.v if which == "v" else t.u
        trial = self.clone()
        trial.split(idx, _RelaxStatus(True, which, vec), depth,
                    thr=self.opts.near_reduce_tol * vec.max(), record=False)
        if trial.distance() >= self.distance() - self.opts.tol:
            return False
        self.X = trial.X
        self.iterations += trial.iterations
        self.flags |= trial.flags
        self.record("reduce", reduce=True, vec=vec)
        return True

    # -- reduction and escapes ----------------------------------------------
    def solve(self, idx, fresh=False, depth=0):
        """Stabilize the principal block ``idx`` starting from the current ``X``.

        The off-block data of a reducible ``A`` block is copied from ``A``;
        diagonal blocks already stable in ``A`` are copied as well.
        """
        if depth > self.d + 1:
            raise RuntimeError("recursion deeper than the dimension")
        geom = self.geom
        Ab = self.block(self.A, idx)
        st = geom.structure(Ab, self.opts.zero_tol)
        if st.m == 1:
            if geom.leading(Ab) <= geom.level:
                self.X[np.ix_(idx, idx)] = Ab
                return
            if fresh:
                self.X[np.ix_(idx, idx)] = geom.start(Ab)
            self.solve_irreducible(idx, depth)
            return
        old = self.block(self.X, idx)
        new = Ab.copy()
        active = []
        for b in st.blocks:
            sub = idx[b]
            ix = np.ix_(b, b)
            if geom.leading(Ab[ix]) <= geom.level:
                continue
            new[ix] = geom.start(Ab[ix]) if fresh else old[ix]
            active.append(sub)
        self.X[np.ix_(idx, idx)] = new
        self.record("init" if fresh else "reduce", reduce=not fresh)
        for sub in active:
            self.solve_irreducible(sub, depth + 1)

    def solve_irreducible(self, idx, depth):
        opts = self.opts
        escapes = descents = weights = 0
        while True:
            status = self.relax(idx)
            if status.reduce:
                self.split(idx, status, depth)
                return
            if status.maxed or status.done:
                return
            if weights < opts.max_escapes and self.weights_pass(idx):
                weights += 1
                continue
            if escapes < opts.max_escapes and self.escape(idx):
                escapes += 1
                continue
            if descents < opts.max_descents and (
                    (opts.accelerate and self.polish(idx)) or self.first_order_step(idx)):
                descents += 1
                continue
            return

    def split(self, idx, status, depth, thr=None, record=True):
        geom = self.geom
        vec = status.vec
        if thr is None:
            thr = self.opts.reduce_tol * vec.max()
        P, Z = idx[vec > thr], idx[vec <= thr]
        if status.which == "v":
            self.X[np.ix_(P, Z)] = self.A[np.ix_(P, Z)]
            self.X[np.ix_(Z, P)] = 0.0
        else:
            self.X[np.ix_(Z, P)] = self.A[np.ix_(Z, P)]
            self.X[np.ix_(P, Z)] = 0.0
        AZ = self.block(self.A, Z)
        red1 = geom.leading(AZ) < geom.level
        if red1:
            self.X[np.ix_(Z, Z)] = AZ
        if record:
            self.pending_reduce = vec
        self.solve(P, depth=depth + 1)
        if not red1:
            self.solve(Z, depth=depth + 1)
        if self.pending_reduce is not None:
            self.record("reduce", reduce=True, vec=vec)

    def weights_pass(self, idx):
        if self.geom.name != "schur" or len(idx) < 2:
            return False
        Xb = self.block(self.X, idx)
        Ab = self.block(self.A, idx)
        if frobenius_normal_form(Xb, self.opts.zero_tol).m != 1:
            return False
        primitive, part = is_primitive(Xb, self.opts.zero_tol)
        if primitive:
            return False
        _, Xn, ok = optimize_cyclic_weights(Xb, Ab, part)
        if not ok:
            self.flags.add("weights_fallback")
        gain = np.linalg.norm(Xb - Ab) - np.linalg.norm(Xn - Ab)
        if np.linalg.norm(Xn - Xb) < self.opts.tol or gain <= 0:
            return False
        self.X[np.ix_(idx, idx)] = Xn
        self.record("weights")
        return True

    def escape(self, idx):
        """Leave a strictly positive stationary point that is not a local minimum.

        Such a point is ``A - G v v^T`` for an eigenvector ``v`` of ``G^T G``
        other than the smallest one. Rotating ``v`` towards the smallest
        eigenvector keeps the leading eigenvalue at ``level`` and lowers the
        distance, as long as the matrix and the vector stay non-negative.
        """
        geom, opts = self.geom, self.opts
        Xb = self.block(self.X, idx)
        Ab = self.block(self.A, idx)
        n = len(idx)
        mask = geom.mask(n)
        if n < 2 or not np.all(Xb[mask] > opts.zero_tol):
            return False
        G = geom.shift(Ab)
        w, W = np.linalg.eigh(G.T @ G)
        v = geom.triple(Xb, opts.eig_tol).v
        if v @ (G.T @ G) @ v - w[0] <= 1e-9 * max(1.0, w[-1]):
            return False
        current = float(np.linalg.norm(Xb - Ab))
        best = None
        for sgn in (1.0, -1.0):
            ww = sgn * W[:, 0]

            def trial(t):
                vt = v + t * ww
                vt = vt / np.linalg.norm(vt)
                Xt = Ab - np.outer(G @ vt, vt)
                feasible = vt.min() > 0 and Xt[mask].min(initial=0.0) >= 0
                return feasible, vt, Xt

            lo, hi = 0.0, 1e6
            if trial(hi)[0]:
                lo = hi
            else:
                for _ in range(80):
                    mid = 0.5 * (lo + hi)
                    if trial(mid)[0]:
                        lo = mid
                    else:
                        hi = mid
            if lo <= 0:
                continue
            ok, vt, Xt = trial(lo)
            Xt = np.where(mask, np.maximum(Xt, 0.0), Xt)
            dist = float(np.linalg.norm(Xt - Ab))
            if ok and dist < current - 1e-12 and (best is None or dist < best[0]):
                best = (dist, Xt)
        if best is None:
            return False
        self.X[np.ix_(idx, idx)] = best[1]
        self.record("escape")
        return True

    def first_order_step(self, idx):
        """Descent step for a fixed point of the relaxation that fails the KKT test.

        Row and column fixed points need not share one multiplier when the
        support is sparse. Projecting ``A`` onto the linearization
        ``(Y, u v^T) <= (X, u v^T) - delta`` gives a direction along which the
        leading eigenvalue decreases and so does the distance; backtracking
        keeps the step feasible.
        """
        geom, opts = self.geom, self.opts
        Xb = self.block(self.X, idx)
        Ab = self.block(self.A, idx)
        n = len(idx)
        cert = verify_generic(Xb, Ab, geom, opts.cert_tol, zero_tol=opts.zero_tol,
                              eig_tol=opts.eig_tol)
        if cert.accepted:
            return False
        t = geom.triple(Xb, opts.eig_tol)
        if t.v.min() <= 0 or t.u.min() <= 0:
            return False
        R = np.outer(t.u, t.v)
        current = float(np.linalg.norm(Xb - Ab))
        free = np.flatnonzero(np.eye(n, dtype=bool).ravel()) if geom.free_diagonal else None
        base = float(np.sum(Xb * R))
        for delta in (1e-3, 1e-5, 1e-7):
            cap = base - delta * max(1.0, abs(base))
            if free is None and cap < 0:
                continue
            Y = project_row(Ab.ravel(), R.ravel(), cap, free=free).x.reshape(n, n)
            step = Y - Xb
            s = 1.0
            for _ in range(40):
                Z = Xb + s * step
                if geom.leading(Z) <= geom.level and np.linalg.norm(Z - Ab) < current - opts.tol:
                    self.X[np.ix_(idx, idx)] = Z
                    self.record("escape")
                    return True
                s *= 0.5
        return False


def _prepare(A, geom):
    if geom.name == "schur":
        return np.maximum(A, 0.0)
    A0 = np.maximum(A, 0.0)
    np.fill_diagonal(A0, np.diag(A))
    return A0


def inner_relax_generic(A, X0, geom, opts):
    """One run of the alternating relaxation from ``X0`` on the whole matrix."""
    A = np.asarray(A, dtype=float)
    X0 = np.asarray(X0, dtype=float)
    run = _Run(A, geom, opts)
    run.X = X0.copy()
    run.record("init")
    status = run.relax(np.arange(A.shape[0]))
    return run.X, status, run


def stabilize_generic(A, geom, opts: SolverOptions):
    A_in = np.asarray(A, dtype=float)
    A0 = _prepare(A_in, geom)
    d = A0.shape[0]
    run = _Run(A0, geom, opts)
    idx = np.arange(d)
    if geom.leading(A0) <= geom.level:
        run.record("init")
    elif opts.init_strategy == "custom":
        X0 = np.asarray(opts.X0, dtype=float)
        if X0.shape != A0.shape:
            raise ValueError("X0 must have the shape of A")
        if geom.leading(X0) > geom.level + opts.cert_tol:
            raise PreconditionError("X0 is not stable")
        run.X = X0.copy()
        run.record("init")
        if geom.structure(A0, opts.zero_tol).m == 1:
            run.solve_irreducible(idx, 0)
        else:
            run.solve(idx)
    else:
        st = geom.structure(A0, opts.zero_tol)
        if st.m == 1:
            run.X = geom.start(A0)
            run.record("init")
            run.solve_irreducible(idx, 0)
        else:
            run.solve(idx, fresh=True)
    X = run.X.copy()
    cert = verify_generic(X, A0, geom, opts.cert_tol, zero_tol=opts.zero_tol, eig_tol=opts.eig_tol)
    classification = _classify(X, A0, geom, cert, run, opts)
    return StabilizeResult(X, float(np.linalg.norm(X - A_in)), run.iterations, run.trace,
                           cert, classification, tuple(sorted(run.flags)))


def _classify(X, A, geom, cert, run, opts):
    if "max_iter" in run.flags or not cert.accepted:
        return "stationary_unverified"
    mask = geom.mask(X.shape[0])
    if geom.leading(A) > geom.level and np.all(X[mask] > opts.zero_tol):
        cand = positive_candidate_generic(A, geom, opts.cert_tol, opts.eig_tol)
        if cand is not None and np.abs(cand.X - X).max() <= 1e-6 * max(1.0, np.abs(A).max()):
            return "positive_global"
    return "stationary_local"


# ---------------------------------------------------------------------------
# certificates

def _reject(reason, d, blocks=None):
    return StationarityCertificate(False, reason, 0.0, None, None, np.zeros((d, d)), blocks or [])


def verify_generic(X, A, geom, cert_tol=1e-6, mode="stabilize", zero_tol=ZERO_TOL, eig_tol=EIG_TOL):
    """Check the first-order conditions blockwise on the Frobenius form of ``X``."""
    X = np.asarray(X, dtype=float)
    A = np.asarray(A, dtype=float)
    d = X.shape[0]
    tol = cert_tol * max(1.0, float(np.linalg.norm(A)))
    mask = geom.mask(d)
    if X[mask].min(initial=0.0) < -tol:
        return _reject("X violates the sign constraint", d)
    lead = geom.leading(X)
    if mode == "destabilize":
        return _verify_destab(X, A, geom, tol, lead, eig_tol)
    if lead > geom.level + tol:
        return _reject(f"leading eigenvalue {lead:.6g} exceeds {geom.level:g}", d)

    st = _consistent_order(X, A, geom, zero_tol, tol)
    if st is None:
        return _reject("no block ordering puts A above the diagonal blocks", d)

    Lam = np.zeros((d, d))
    blocks = []
    head = None
    total = 0.0
    for b in st.blocks:
        ix = np.ix_(b, b)
        Xb, Ab = X[ix], A[ix]
        if geom.leading(Ab) <= geom.level + tol:
            err = float(np.abs(Xb - Ab).max())
            if err > tol:
                blocks.append(BlockCertificate(b, "rejected", residual=err))
                return _reject("a block whose data is stable differs from A", d, blocks)
            blocks.append(BlockCertificate(b, "frozen_copy_of_A"))
            continue
        lb = geom.leading(Xb)
        if abs(lb - geom.level) > tol:
            blocks.append(BlockCertificate(b, "rejected"))
            return _reject(f"block leading eigenvalue {lb:.6g} is not at the boundary", d, blocks)
        t = geom.triple(Xb, eig_tol)
        R = np.outer(t.u, t.v)
        D = Ab - Xb
        supp = Xb > zero_tol
        if geom.free_diagonal:
            np.fill_diagonal(supp, True)
        rr = float(np.sum(D[supp] * R[supp]) / max(np.sum(R[supp] ** 2), 1e-300))
        Lb = np.where(supp, 0.0, np.maximum(rr * R - D, 0.0))
        res = float(np.linalg.norm(D - rr * R + Lb))
        total = max(total, res)
        status = "stationary_primitive"
        if geom.name == "schur" and len(b) > 1:
            primitive, part = is_primitive(Xb, zero_tol)
            if not primitive:
                status = "stationary_imprimitive"
                prods = cyclic_products(Xb, Ab, part)
                if prods.max() - prods.min() > tol:
                    blocks.append(BlockCertificate(b, "rejected", rr, res, t.u, t.v))
                    return _reject("cyclic weights are not optimal", d, blocks)
        if res > tol or rr < -tol:
            blocks.append(BlockCertificate(b, "rejected", rr, res, t.u, t.v))
            return _reject(f"KKT residual {res:.3g} (r = {rr:.6g})", d, blocks)
        Lam[ix] = Lb
        blocks.append(BlockCertificate(b, status, rr, res, t.u, t.v))
        if head is None:
            head = blocks[-1]
    r = head.r if head else 0.0
    u = head.u if head else None
    v = head.v if head else None
    return StationarityCertificate(True, "ok", r, u, v, Lam, blocks, total)


def _consistent_order(X, A, geom, zero_tol, tol):
    """Frobenius form of ``X`` whose block order has ``X = A`` above the blocks.

    Positive couplings of ``X`` must point forward; zero couplings that differ
    from ``A`` must point backward. Such an order exists iff the block graph
    combining both kinds of edges is acyclic. Returns ``None`` otherwise.
    """
    st = geom.structure(X, zero_tol)
    d = X.shape[0]
    comp = np.empty(d, dtype=np.intp)
    for bi, b in enumerate(st.blocks):
        comp[b] = bi
    diff = np.abs(X - A) > tol
    pos_edge = X > zero_tol
    adj = [set() for _ in range(st.m)]
    for i, j in zip(*np.nonzero(comp[:, None] != comp[None, :])):
        ci, cj = comp[i], comp[j]
        if pos_edge[i, j]:
            if diff[i, j]:
                return None
            adj[ci].add(cj)
        elif diff[i, j]:
            adj[cj].add(ci)
    sccs = strongly_connected_components([sorted(a) for a in adj])
    if any(len(c) > 1 for c in sccs):
        return None
    blocks = tuple(st.blocks[c[0]] for c in reversed(sccs))
    return BlockStructure(np.concatenate(blocks), blocks)


def _verify_destab(X, A, geom, tol, lead, eig_tol):
    d = X.shape[0]
    if abs(lead - geom.level) > tol:
        return _reject(f"leading eigenvalue {lead:.6g} is not {geom.level:g}", d)
    t = geom.triple(X, eig_tol)
    R = np.outer(t.u, t.v)
    D = X - A
    rr = float(np.sum(D * R))
    res = float(np.linalg.norm(D - rr * R))
    ok = res <= tol and rr >= -tol
    blk = BlockCertificate(np.arange(d), "rank_one" if ok else "rejected", rr, res, t.u, t.v)
    return StationarityCertificate(ok, "ok" if ok else f"X - A is not r u v^T (residual {res:.3g})",
                                   rr, t.u, t.v, np.zeros((d, d)), [blk], res)
