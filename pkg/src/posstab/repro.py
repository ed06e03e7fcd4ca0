"""Regression table for the built-in reference examples."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import datasets
from ._engine import SolverOptions
from .hurwitz import hurwitz_stabilize
from .schur import (closest_unstable, inner_relax, positive_candidate,
                    stabilize, verify_stationary)
from .spectral import spectral_radius


@dataclass
class Check:
    name: str
    passed: bool
    detail: str


def _max_err(X, Y):
    return float(np.abs(np.asarray(X) - np.asarray(Y)).max())


def run_checks():
    out = []

    A, X_ref, r_ref = datasets.destabilization_3x3()
    res = closest_unstable(A)
    err = _max_err(res.X, X_ref)
    ok = abs(res.r - r_ref) <= 5e-4 and err <= 5e-4 and abs(spectral_radius(res.X) - 1) <= 1e-8
    out.append(Check("destabilize 3x3", ok, f"r={res.r:.4f} (ref {r_ref}), max entry error {err:.1e}"))
    cert = verify_stationary(res.X, A, mode="destabilize")
    out.append(Check("destabilize 3x3 rank-one certificate", cert.accepted, f"residual {cert.residual:.1e}"))

    A, X_ref, r_ref = datasets.positive_stabilization_3x3()
    cand = positive_candidate(A)
    st = stabilize(A)
    ok = (cand is not None and _max_err(cand.X, X_ref) <= 5e-4 and _max_err(st.X, X_ref) <= 5e-4
          and abs(st.distance - r_ref) <= 5e-4 and st.classification == "positive_global")
    out.append(Check("stabilize 3x3 positive", ok,
                     f"distance={st.distance:.4f} (ref {r_ref}), {st.classification}"))

    A, _, X_star, d_first, d_final = datasets.reducible_pipeline_5x5()
    st = stabilize(A)
    first = st.first_reducible_distance
    err = _max_err(st.X, X_star)
    ok = (first is not None and abs(first - d_first) <= 2e-3 and abs(st.distance - d_final) <= 2e-3
          and err <= 2e-3)
    first_txt = "none" if first is None else f"{first:.4f}"
    out.append(Check("stabilize 5x5 reducible pipeline", ok,
                     f"final {st.distance:.4f} (ref {d_final}), first reducible {first_txt} "
                     f"(ref {d_first}), max entry error {err:.3f}"))

    A, X_ref = datasets.triangular_2x2()
    st = stabilize(A)
    out.append(Check("stabilize [[2,2],[0,0]]", bool(np.array_equal(st.X, X_ref)),
                     f"distance={st.distance:.4f}"))

    E = np.ones((2, 2))
    st = stabilize(0.75 * E)
    ok = _max_err(st.X, E / 2) <= 1e-9 and abs(st.distance - 0.5) <= 1e-9
    out.append(Check("stabilize 0.75 E", ok, f"distance={st.distance:.6f}"))

    a = 1.5
    st = stabilize(a * E)
    tri = [np.array([[1, a], [0, 1]]), np.array([[1, 0], [a, 1]])]
    ok = (positive_candidate(a * E) is None and min(_max_err(st.X, T) for T in tri) <= 1e-6)
    out.append(Check("stabilize 1.5 E", ok, f"distance^2={st.distance ** 2:.6f}"))

    X, reduce, trace = inner_relax(2 * E, E / 2)
    out.append(Check("relaxation fixed point at E/2 for 2E", _max_err(X, E / 2) <= 1e-12 and not reduce,
                     f"{len(trace) - 1} steps"))

    A, _, d2_ref, d2_other = datasets.non_metzler_5x5()
    h = hurwitz_stabilize(A)
    ok = h.distance ** 2 <= d2_ref + 0.02 and h.alpha <= 1e-6 and h.distance ** 2 < d2_other
    out.append(Check("Hurwitz 5x5 (non-Metzler input)", ok,
                     f"distance^2={h.distance ** 2:.4f} (ref {d2_ref}), alpha={h.alpha:.1e}"))

    A, d2_ref = datasets.random_metzler_6x6()
    h = hurwitz_stabilize(A)
    reducible = any(s.reduce for s in h.trace)
    ok = h.distance ** 2 <= d2_ref + 0.02 and h.alpha <= 1e-6 and reducible
    out.append(Check("Hurwitz 6x6 Metzler", ok,
                     f"distance^2={h.distance ** 2:.4f} (ref {d2_ref}), alpha={h.alpha:.1e}, "
                     f"reducible iterate seen: {reducible}"))
    return out


def format_table(checks):
    width = max(len(c.name) for c in checks)
    lines = [f"{'PASS' if c.passed else 'FAIL'}  {c.name.ljust(width)}  {c.detail}" for c in checks]
    n = sum(c.passed for c in checks)
    lines.append(f"{n}/{len(checks)} passed")
    return "\n".join(lines)
