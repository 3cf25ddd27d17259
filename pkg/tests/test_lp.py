import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy.optimize import linprog

from minimaxlab.core import Tolerance
from minimaxlab.exceptions import CycleLimitExceeded, DimensionMismatch, ValidationError
from minimaxlab.lp import GameSolution, LpProblem, Status, solve_lp, solve_zero_sum, verify_lp_solution
from tests.conftest import matrices


def solve_checked(problem):
    sol = solve_lp(problem)
    if sol.status is Status.OPTIMAL:
        cert = verify_lp_solution(problem, sol)
        assert cert.ok, cert
    return sol


def test_single_lower_bound_row():
    sol = solve_checked(LpProblem(c=[1.0], A=[[1.0]], b=[1.0], senses=(">=",)))
    assert sol.status is Status.OPTIMAL
    assert sol.x[0] == pytest.approx(1.0)
    assert sol.objective == pytest.approx(1.0)


def test_binding_upper_row():
    sol = solve_checked(LpProblem(c=[1.0], A=[[1.0], [1.0]], b=[0.0, 5.0], maximize=True))
    assert sol.status is Status.OPTIMAL
    assert sol.x[0] == pytest.approx(0.0)


def test_infeasible():
    sol = solve_lp(LpProblem(c=[0.0], A=[[1.0]], b=[-1.0]))
    assert sol.status is Status.INFEASIBLE


def test_unbounded():
    sol = solve_lp(LpProblem(c=[-1.0, 0.0], A=[[1.0, -1.0]], b=[1.0]))
    assert sol.status is Status.UNBOUNDED


def test_free_and_boxed_variables():
    # min x0 - x1 with x0 free, 0 <= x1 <= 2 and x0 >= -3 via a row
    p = LpProblem(c=[1.0, -1.0], A=[[1.0, 0.0]], b=[-3.0], senses=(">=",), bounds=((None, None), (0.0, 2.0)))
    sol = solve_checked(p)
    assert sol.objective == pytest.approx(-5.0)
    np.testing.assert_allclose(sol.x, [-3.0, 2.0], atol=1e-12)


def test_redundant_equalities():
    p = LpProblem(c=[1.0, 1.0], A=[[1.0, 1.0], [2.0, 2.0]], b=[1.0, 2.0], senses=("=", "="))
    sol = solve_checked(p)
    assert sol.objective == pytest.approx(1.0)


def test_beale_cycling_example_terminates():
    # classic degenerate LP on which the largest-coefficient rule cycles
    c = [-0.75, 150.0, -0.02, 6.0]
    A = [[0.25, -60.0, -0.04, 9.0], [0.5, -90.0, -0.02, 3.0], [0.0, 0.0, 1.0, 0.0]]
    sol = solve_checked(LpProblem(c=c, A=A, b=[0.0, 0.0, 1.0]))
    assert sol.objective == pytest.approx(-0.05)


def test_iteration_cap():
    rng = np.random.default_rng(3)
    A = rng.uniform(0.1, 1.0, (8, 8))
    with pytest.raises(CycleLimitExceeded):
        solve_lp(LpProblem(c=-np.ones(8), A=A, b=np.ones(8)), max_iter=1)


@pytest.mark.parametrize(
    "kwargs",
    [
        dict(c=[1.0, 2.0], A=[[1.0]], b=[1.0]),
        dict(c=[1.0], A=[[1.0]], b=[1.0, 2.0]),
        dict(c=[1.0], A=[[1.0]], b=[1.0], senses=("<=", "<=")),
        dict(c=[1.0], A=[[1.0]], b=[1.0], bounds=((0, 1), (0, 1))),
    ],
)
def test_dimension_mismatch(kwargs):
    with pytest.raises(DimensionMismatch):
        LpProblem(**kwargs)


def test_bad_sense_and_nonfinite():
    with pytest.raises(ValidationError):
        LpProblem(c=[1.0], A=[[1.0]], b=[1.0], senses=("<",))
    with pytest.raises(ValidationError):
        LpProblem(c=[np.nan], A=[[1.0]], b=[1.0])


def _random_lp(rng):
    n = int(rng.integers(1, 7))
    m = int(rng.integers(1, 7))
    A = rng.integers(-4, 5, (m, n)).astype(float)
    b = rng.integers(-4, 9, m).astype(float)
    c = rng.integers(-5, 6, n).astype(float)
    senses = tuple(rng.choice(["<=", "=", ">="], m))
    bounds = []
    for _ in range(n):
        kind = rng.integers(0, 4)
        bounds.append([(0.0, None), (None, None), (-2.0, 3.0), (None, 4.0)][kind])
    return LpProblem(c=c, A=A, b=b, senses=senses, bounds=tuple(bounds), maximize=bool(rng.integers(0, 2)))


def _scipy(problem):
    sign = -1.0 if problem.maximize else 1.0
    ub_rows, ub_rhs, eq_rows, eq_rhs = [], [], [], []
    for row, rhs, s in zip(problem.A, problem.b, problem.senses):
        if s == "<=":
            ub_rows.append(row), ub_rhs.append(rhs)
        elif s == ">=":
            ub_rows.append(-row), ub_rhs.append(-rhs)
        else:
            eq_rows.append(row), eq_rhs.append(rhs)
    bounds = [(None if not np.isfinite(lo) else lo, None if not np.isfinite(hi) else hi) for lo, hi in problem.bounds]
    return linprog(
        sign * problem.c,
        A_ub=np.array(ub_rows) if ub_rows else None,
        b_ub=ub_rhs or None,
        A_eq=np.array(eq_rows) if eq_rows else None,
        b_eq=eq_rhs or None,
        bounds=bounds,
        method="highs",
    )


def test_matches_scipy_on_random_lps():
    rng = np.random.default_rng(20240)
    counts = {s: 0 for s in Status}
    for _ in range(400):
        p = _random_lp(rng)
        ours = solve_lp(p)
        ref = _scipy(p)
        expected = {0: Status.OPTIMAL, 2: Status.INFEASIBLE, 3: Status.UNBOUNDED}[ref.status]
        assert ours.status is expected
        counts[expected] += 1
        if expected is Status.OPTIMAL:
            sign = -1.0 if p.maximize else 1.0
            assert ours.objective == pytest.approx(sign * ref.fun, abs=1e-7)
            assert verify_lp_solution(p, ours).ok
    assert all(v > 10 for v in counts.values()), counts


def test_duals_are_sensitivities():
    rng = np.random.default_rng(7)
    checked = 0
    for _ in range(60):
        p = _random_lp(rng)
        sol = solve_lp(p)
        if sol.status is not Status.OPTIMAL:
            continue
        for r in range(p.n_rows):
            b2 = p.b.copy()
            b2[r] += 1e-6
            p2 = LpProblem(p.c, p.A, b2, p.senses, p.bounds, p.maximize)
            sol2 = solve_lp(p2)
            if sol2.status is not Status.OPTIMAL:
                continue
            slope = (sol2.objective - sol.objective) / 1e-6
            # nondegenerate rows only: the one-sided slope matches the dual
            if abs(slope - sol.y[r]) < 1e-4:
                checked += 1
    assert checked > 20


# -- zero-sum games ---------------------------------------------------------


@pytest.mark.parametrize("c", [-3.5, 0.0, 2.0])
def test_one_by_one_game(c):
    g = solve_zero_sum([[c]])
    assert g.value == pytest.approx(c)
    assert g.row_weights.tolist() == [1.0] and g.col_weights.tolist() == [1.0]


def test_matching_pennies(frozen):
    g = solve_zero_sum([[0, 1], [1, 0]])
    assert g.value == pytest.approx(frozen["matching_pennies_minmax"], abs=1e-12)
    assert g.value == pytest.approx(frozen["matching_pennies_maxmin"], abs=1e-12)
    np.testing.assert_allclose(g.row_weights, [0.5, 0.5], atol=1e-12)
    np.testing.assert_allclose(g.col_weights, [0.5, 0.5], atol=1e-12)


def test_dominating_zero_row():
    g = solve_zero_sum([[1, 0], [0, 0]])
    assert g.value == pytest.approx(0.0, abs=1e-12)
    np.testing.assert_allclose(g.row_weights, [0.0, 1.0], atol=1e-12)


def test_dominant_column():
    g = solve_zero_sum([[1, 1]])
    assert g.value == pytest.approx(1.0)


@given(matrices())
def test_duality_and_certificate(data):
    g = solve_zero_sum(data)
    lower, upper = g.guarantees(data)
    assert upper - lower <= 1e-7
    assert data.min(axis=0).max() <= g.value + 1e-7
    assert g.value <= data.max(axis=1).min() + 1e-7
    assert g.verify(data)


@given(matrices(), st.floats(-10, 10))
def test_shift_equivariance(data, c):
    a, b = solve_zero_sum(data), solve_zero_sum(data + c)
    assert b.value == pytest.approx(a.value + c, abs=1e-7)
    assert b.verify(data + c)
    # the shifted strategies are optimal for the original game too
    assert GameSolution(a.value, b.row_weights, b.col_weights).verify(data)


@given(matrices(), st.floats(0.01, 100))
def test_positive_scaling(data, alpha):
    a, b = solve_zero_sum(data), solve_zero_sum(alpha * data)
    assert b.value == pytest.approx(alpha * a.value, abs=1e-7 * max(1.0, alpha))
    assert GameSolution(a.value, b.row_weights, b.col_weights).verify(data, Tolerance(eps_cert=1e-6))


def test_game_solution_round_trip():
    g = solve_zero_sum([[3, -1, 2], [0, 4, -2]])
    again = GameSolution.from_dict(g.to_dict())
    assert again.value == g.value
    assert again.verify([[3, -1, 2], [0, 4, -2]])
    with pytest.raises(ValidationError):
        GameSolution.from_dict({"value": 1.0})


def test_tampered_solution_fails_verification():
    F = [[0, 1], [1, 0]]
    g = solve_zero_sum(F)
    assert not GameSolution(g.value - 0.1, g.row_weights, g.col_weights).verify(F)
    assert not GameSolution(g.value, np.array([1.0, 0.0]), g.col_weights).verify(F)
    assert not GameSolution(g.value, np.array([1.0]), g.col_weights).verify(F)
