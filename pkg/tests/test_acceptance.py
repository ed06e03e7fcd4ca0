"""Acceptance criteria at their stated tolerances; one PASS/FAIL line each."""
import numpy as np
import pytest

from acceptance_log import report
from oracles import grid_qp, rho_below, two_by_two_stable_distance_sq
from posstab import (SolverOptions, closest_unstable, enumerate_local_minima,
                     hurwitz_stabilize, lower_dominant_example, positive_candidate,
                     stabilize, verify_stationary)
from posstab import datasets
from posstab.rowqp import project_row
from posstab.spectral import spectral_radius, two_smallest_singular_values


def _max_err(X, Y):
    return float(np.abs(np.asarray(X) - np.asarray(Y)).max())


def test_destabilization_3x3():
    A, X_ref, r_ref = datasets.destabilization_3x3()
    res = closest_unstable(A)
    err = _max_err(res.X, X_ref)
    rho = spectral_radius(res.X)
    ok = abs(res.r - r_ref) <= 5e-4 and err <= 5e-4 and abs(rho - 1) <= 1e-8
    report(1, ok, f"destabilization 3x3: r={res.r:.5f}, max entry error {err:.1e}, rho-1={rho - 1:.1e}")
    assert ok


def test_positive_stabilization_3x3():
    A, X_ref, d_ref = datasets.positive_stabilization_3x3()
    cand = positive_candidate(A)
    res = stabilize(A)
    e1 = _max_err(cand.X, X_ref) if cand is not None else np.inf
    e2 = _max_err(res.X, X_ref)
    ok = e1 <= 5e-4 and e2 <= 5e-4 and abs(res.distance - d_ref) <= 5e-4 \
        and res.classification == "positive_global"
    report(2, ok, f"positive stabilization 3x3: distance={res.distance:.5f}, entry errors "
                  f"{e1:.1e}/{e2:.1e}, {res.classification}")
    assert ok


def test_reducible_pipeline_5x5():
    A, _, X_star, d_first, d_final = datasets.reducible_pipeline_5x5()
    res = stabilize(A)
    first = res.first_reducible_distance
    err = _max_err(res.X, X_star)
    ok = (first is not None and abs(first - d_first) <= 2e-3
          and abs(res.distance - d_final) <= 2e-3 and err <= 2e-3)
    report(3, ok, f"reducible pipeline 5x5: final {res.distance:.4f} (target {d_final}), first "
                  f"reducible {first if first is None else round(first, 4)} (target {d_first}), "
                  f"max entry error {err:.3f}")
    assert ok


def test_triangular_two_by_two():
    A, X_ref = datasets.triangular_2x2()
    res = stabilize(A)
    ok = np.array_equal(res.X, X_ref) and res.distance == 1.0
    report(4, ok, f"[[2,2],[0,0]] -> {res.X.tolist()}, distance {res.distance}")
    assert ok


def test_constant_family():
    E = np.ones((2, 2))
    a = 0.75
    low = stabilize(a * E)
    ok_low = _max_err(low.X, E / 2) <= 1e-9 and abs(low.distance - (2 * a - 1)) <= 1e-9
    a = 1.5
    oracle = two_by_two_stable_distance_sq(a * E)
    frozen = 2 * (a - 1) ** 2 + a ** 2
    high = stabilize(a * E)
    tri = (np.array([[1, a], [0, 1]]), np.array([[1, 0], [a, 1]]))
    err = min(_max_err(high.X, T) for T in tri)
    ok_high = (err <= 1e-6 and abs(oracle - frozen) <= 1e-9
               and abs(high.distance ** 2 - frozen) <= 1e-9 and positive_candidate(a * E) is None)
    ok = ok_low and ok_high
    report(5, ok, f"constant 2x2: alpha=0.75 distance {low.distance:.6f}; alpha=1.5 distance^2 "
                  f"{high.distance ** 2:.6f} (grid oracle {oracle:.6f}), no positive candidate")
    assert ok


def test_hurwitz_non_metzler_5x5():
    A, _, d2_ref, d2_prev = datasets.non_metzler_5x5()
    res = hurwitz_stabilize(A)
    d2 = res.distance ** 2
    ok = d2 <= 9.352 and res.alpha <= 1e-6 and d2 < d2_prev
    report(6, ok, f"Hurwitz 5x5: distance^2={d2:.4f} (bound 9.352, previous 9.485), alpha={res.alpha:.1e}")
    assert ok


def test_hurwitz_metzler_6x6():
    A, _ = datasets.random_metzler_6x6()
    res = hurwitz_stabilize(A)
    d2 = res.distance ** 2
    seen = any(s.reduce for s in res.trace)
    ok = d2 <= 4.710 and res.alpha <= 1e-6 and seen
    report(7, ok, f"Hurwitz 6x6: distance^2={d2:.4f} (bound 4.710), alpha={res.alpha:.1e}, "
                  f"reducible iterate seen: {seen}")
    assert ok


def _fixed_point_identity_errors(A, res):
    """|dist_k - ||(I - A) v|| | on row steps whose iterate is positive with every row active."""
    d = len(A)
    G = A - np.eye(d)
    errs = []
    for s in res.trace:
        if s.kind != "row" or s.reduce or s.vec is None or len(s.vec) != d:
            continue
        if np.all(s.X > 0) and np.allclose(s.X @ s.vec, s.vec, rtol=0, atol=1e-12):
            errs.append(abs(s.distance - np.linalg.norm(G @ s.vec)))
    return errs


def test_property_suite(instances):
    opts = SolverOptions(record_iterates=True)
    descent = monotone = kkt = 0.0
    feasible = True
    identity = []
    for A in instances:
        res = stabilize(A, opts)
        tr = res.trace
        for s0, s1 in zip(tr, tr[1:]):
            monotone = max(monotone, s1.distance - s0.distance)
            if s1.kind in ("row", "col") and not s1.reduce:
                viol = np.sum((s1.X - s0.X) ** 2) - (s0.distance ** 2 - s1.distance ** 2)
                descent = max(descent, viol)
        cert = res.certificate
        kkt = max(kkt, cert.residual if cert.accepted else np.inf)
        feasible &= bool(np.all(res.X >= 0) and rho_below(res.X, 1 + 1e-6))
        identity += _fixed_point_identity_errors(A, res)

    rng = np.random.default_rng(11)
    qp_err = 0.0
    for k in range(100):
        d = 2 if k % 2 else 3
        a, v, cap = rng.uniform(-1, 2, d), rng.uniform(0.2, 1.0, d), rng.uniform(0.0, 1.5)
        qp_err = max(qp_err, _max_err(project_row(a, v, cap).x, grid_qp(a, v, cap)))

    rng = np.random.default_rng(12)
    gap, samples = np.inf, 0
    while samples < 1000:
        d = int(rng.integers(2, 6))
        A = rng.random((d, d))
        A *= rng.uniform(0.3, 0.95) / spectral_radius(A)
        res = closest_unstable(A)
        for _ in range(20):
            B = res.X + rng.random((d, d)) * rng.uniform(0, 1e-2) if rng.random() < 0.5 \
                else rng.random((d, d)) * rng.uniform(1.0, 1.5)
            Y = B if spectral_radius(B) >= 1 else B / spectral_radius(B)
            gap = min(gap, np.linalg.norm(Y - A) - (res.r - 1e-8))
            samples += 1

    plain = SolverOptions(record_iterates=True, accelerate=False)
    A42, _, _ = datasets.positive_stabilization_3x3()
    identity += _fixed_point_identity_errors(A42, stabilize(A42, plain))
    rng = np.random.default_rng(13)
    for _ in range(20):
        A = rng.random((4, 4)) + 0.3
        A *= rng.uniform(1.02, 1.3) / spectral_radius(A)
        identity += _fixed_point_identity_errors(A, stabilize(A, plain))
    id_err = max(identity) if identity else np.inf

    parts = {
        "a": descent <= 1e-10, "b": monotone <= 1e-12, "c": qp_err <= 2e-3,
        "d": gap >= 0, "e": kkt <= 1e-6 and feasible, "f": id_err <= 1e-8,
    }
    ok = all(parts.values())
    report(8, ok, f"property suite: descent {descent:.1e}, monotone {monotone:.1e}, rowqp grid {qp_err:.1e}, "
                  f"sampling gap {gap:.1e}, KKT {kkt:.1e}, identity {id_err:.1e} over {len(identity)} steps "
                  f"[{' '.join(k + ('+' if v else '-') for k, v in parts.items())}]")
    assert ok


def test_partition_minima():
    counts = {}
    ok = True
    for d in (2, 3, 4):
        A = lower_dominant_example(d)
        found = enumerate_local_minima(A)
        counts[d] = len(found)
        ok &= len(found) >= 2 ** (d - 1)
        ok &= all(verify_stationary(X, A).accepted for _, X, _ in found)
        Xs = [X for _, X, _ in found]
        ok &= all(np.linalg.norm(Xs[i] - Xs[j]) > 1e-6 for i in range(len(Xs)) for j in range(i))
    report(9, ok, f"partition minima: distinct stationary counts {counts} (bounds 2, 4, 8)")
    assert ok


def test_convergence_rate():
    A, _, _ = datasets.positive_stabilization_3x3()
    res = stabilize(A, SolverOptions(record_iterates=True, accelerate=False, tol=1e-15))
    v_star = positive_candidate(A).v
    s1, s2 = two_smallest_singular_values(np.eye(3) - A)
    bound = (s1 / s2) ** 2 + 0.05
    errs = [np.linalg.norm(s.vec - v_star) for s in res.trace if s.kind == "row"]
    ratios = [e1 / e0 for e0, e1 in zip(errs, errs[1:]) if e0 < 1e-3 and e1 > 1e-12]
    worst = max(ratios) if ratios else np.inf
    ok = len(ratios) >= 2 and worst <= bound
    report(10, ok, f"rate: worst double-step contraction {worst:.4f} over {len(ratios)} steps, "
                   f"bound {bound:.4f}")
    assert ok
