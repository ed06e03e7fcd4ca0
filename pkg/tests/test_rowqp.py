import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from oracles import grid_qp
from posstab.rowqp import QP_TOL, interior_formula, project_row, project_rows

vec3 = arrays(np.float64, 3, elements=st.floats(-3, 3, allow_nan=False))
pos3 = arrays(np.float64, 3, elements=st.floats(0.05, 3, allow_nan=False))
caps = st.floats(0, 5, allow_nan=False)


def test_slack_example():
    sol = project_row([1.0, 1.0], [1.0, 1.0], 3.0)
    assert sol.x.tolist() == [1.0, 1.0] and sol.lam == 0.0


def test_interior_example():
    sol = project_row([1.0, 1.0], [1.0, 1.0], 1.0)
    np.testing.assert_allclose(sol.x, [0.5, 0.5])
    assert sol.lam == pytest.approx(0.5)
    np.testing.assert_allclose(interior_formula([1.0, 1.0], [1.0, 1.0], 1.0), sol.x)


def test_clamped_example_against_line_grid():
    sol = project_row([2.0, 0.1], [1.0, 1.0], 1.0)
    t = np.arange(0, 1 + 5e-5, 1e-4)
    pts = np.stack([t, 1 - t], 1)
    best = pts[np.argmin(((pts - [2.0, 0.1]) ** 2).sum(1))]
    np.testing.assert_allclose(sol.x, best, atol=1e-4)
    np.testing.assert_allclose(sol.x, [1.0, 0.0], atol=1e-14)
    assert sol.lam == pytest.approx(1.0)
    assert sol.active_zero_set == (1,)


def test_errors():
    with pytest.raises(ValueError):
        project_row([1.0, 1.0], [1.0, 0.0], 1.0)
    with pytest.raises(ValueError):
        project_row([1.0, 1.0], [1.0, 1.0], -1.0)
    with pytest.raises(ValueError):
        project_row([np.nan, 1.0], [1.0, 1.0], 1.0)
    with pytest.raises(ValueError):
        interior_formula([1.0, 0.0], [1.0, 1.0], 0.5)


def test_free_coordinate_allows_negative_cap():
    sol = project_row([1.0, 2.0], [1.0, 1.0], -1.0, free=0)
    assert sol.x @ [1.0, 1.0] == pytest.approx(-1.0)
    assert sol.x[1] >= 0
    assert sol.x[0] < 0


def test_grid_oracle_agreement():
    rng = np.random.default_rng(11)
    worst = 0.0
    for k in range(100):
        d = 2 if k % 2 else 3
        a = rng.uniform(-1, 2, d)
        v = rng.uniform(0.2, 1.0, d)
        cap = rng.uniform(0.0, 1.5)
        x = project_row(a, v, cap).x
        worst = max(worst, np.abs(x - grid_qp(a, v, cap)).max())
    assert worst <= 2e-3


@given(vec3, pos3, caps)
def test_kkt_and_slackness(a, v, cap):
    sol = project_row(a, v, cap)
    x, lam = sol.x, sol.lam
    assert np.all(x >= 0)
    assert x @ v <= cap + 1e-9 * (1 + cap)
    assert lam >= 0
    assert abs(lam * (x @ v - cap)) <= max(QP_TOL, 1e-10 * (1 + lam * cap))
    # stationarity: x = max(a - lam v, 0)
    np.testing.assert_allclose(x, np.maximum(a - lam * v, 0), atol=1e-12)


@given(vec3, pos3, caps, st.integers(0, 2), st.randoms())
def test_feasible_perturbations_do_not_decrease(a, v, cap, seed, rnd):
    sol = project_row(a, v, cap)
    x = sol.x
    f = np.sum((x - a) ** 2)
    rng = np.random.default_rng(rnd.randrange(2 ** 32))
    for _ in range(20):
        dx = rng.normal(size=3)
        dx *= 1e-4 / np.linalg.norm(dx)
        y = x + dx
        if np.any(y < 0) or y @ v > cap:
            continue
        assert np.sum((y - a) ** 2) >= f - 1e-12


@given(vec3, vec3, pos3, caps)
def test_nonexpansive(a, b, v, cap):
    xa, xb = project_row(a, v, cap).x, project_row(b, v, cap).x
    assert np.linalg.norm(xa - xb) <= np.linalg.norm(a - b) * (1 + 1e-9) + 1e-12


@given(vec3, pos3, caps)
def test_interior_formula_agrees(a, v, cap):
    try:
        y = interior_formula(a, v, cap)
    except ValueError:
        return
    if np.any(a < 0) and a @ v <= cap:
        return
    np.testing.assert_allclose(project_row(a, v, cap).x, y, atol=1e-10)


def test_project_rows_multipliers_and_free_diagonal():
    A = np.array([[2.0, 1.0], [1.0, 2.0]])
    v = np.array([1.0, 1.0]) / np.sqrt(2)
    X, lam = project_rows(A, v, v, multipliers=True)
    np.testing.assert_allclose(X @ v, v)
    assert np.all(lam > 0)
    M = np.array([[3.0, 0.5], [0.2, -1.0]])
    Y = project_rows(M, v, np.zeros(2), free_diagonal=True)
    assert Y[0] @ v == pytest.approx(0.0, abs=1e-14)
    np.testing.assert_array_equal(Y[1], M[1])
