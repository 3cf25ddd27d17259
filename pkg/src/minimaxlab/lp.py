"""Dense simplex LP solver and zero-sum matrix game solver.

The solver is a textbook two-phase primal simplex on a dense tableau using
Bland's rule (lowest-index entering column, lowest-index basic variable on
ratio ties).  It is meant for small dense problems where determinism matters
more than speed.

Dual values follow the sensitivity convention ``y = d(optimal value)/d(b)``
for both minimization and maximization problems, so that ``b @ y`` plus the
bound terms reproduces the optimal objective.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .core import DEFAULT_TOL, Tolerance, Weights, validate_bimatrix, validate_weights
from .exceptions import CycleLimitExceeded, DimensionMismatch, SolverError, ValidationError

PIVOT_TOL = 1e-10
_SENSES = ("<=", "=", ">=")


class Status(str, enum.Enum):
    OPTIMAL = "Optimal"
    INFEASIBLE = "Infeasible"
    UNBOUNDED = "Unbounded"


@dataclass(frozen=True, eq=False)
class LpProblem:
    """``min/max c @ x`` subject to ``A @ x (senses) b`` and ``lo <= x <= hi``.

    ``bounds`` holds one ``(lo, hi)`` pair per variable; use ``-np.inf`` /
    ``np.inf`` (or ``None``) for a missing bound.  The default bound is
    ``(0, inf)``.
    """

    c: np.ndarray
    A: np.ndarray
    b: np.ndarray
    senses: tuple = ()
    bounds: tuple | None = None
    maximize: bool = False

    def __post_init__(self):
        c = np.asarray(self.c, dtype=float).ravel()
        n = c.shape[0]
        A = np.asarray(self.A, dtype=float)
        if A.size == 0:
            A = A.reshape(0, n)
        b = np.asarray(self.b, dtype=float).ravel()
        if A.ndim != 2 or A.shape[1] != n:
            raise DimensionMismatch(f"constraint matrix shape {A.shape} incompatible with {n} variables")
        if b.shape[0] != A.shape[0]:
            raise DimensionMismatch(f"{A.shape[0]} constraint rows but {b.shape[0]} right-hand sides")
        senses = tuple(self.senses) if self.senses else ("<=",) * A.shape[0]
        if len(senses) != A.shape[0]:
            raise DimensionMismatch(f"{A.shape[0]} constraint rows but {len(senses)} senses")
        for s in senses:
            if s not in _SENSES:
                raise ValidationError(f"unknown row sense {s!r}")
        if self.bounds is None:
            bounds = ((0.0, np.inf),) * n
        else:
            bounds = tuple(
                (-np.inf if lo is None else float(lo), np.inf if hi is None else float(hi))
                for lo, hi in self.bounds
            )
        if len(bounds) != n:
            raise DimensionMismatch(f"{n} variables but {len(bounds)} bounds")
        for lo, hi in bounds:
            if np.isnan(lo) or np.isnan(hi) or lo > hi or lo == np.inf or hi == -np.inf:
                raise ValidationError(f"invalid bound pair ({lo}, {hi})")
        if not (np.all(np.isfinite(c)) and np.all(np.isfinite(A)) and np.all(np.isfinite(b))):
            raise ValidationError("LP coefficients must be finite")
        object.__setattr__(self, "c", c)
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "senses", senses)
        object.__setattr__(self, "bounds", bounds)

    @property
    def n_vars(self) -> int:
        return self.c.shape[0]

    @property
    def n_rows(self) -> int:
        return self.A.shape[0]


@dataclass(frozen=True, eq=False)
class LpSolution:
    status: Status
    x: np.ndarray | None = None
    y: np.ndarray | None = None
    objective: float | None = None
    iterations: int = 0


@dataclass(frozen=True)
class LpCertificate:
    primal_residual: float
    dual_residual: float
    gap: float
    ok: bool


# --------------------------------------------------------------------------
# tableau machinery

REINVERT_EVERY = 25


class _Tableau:
    """Dense tableau that can be rebuilt from the original rows.

    ``W`` holds the untouched rows ``[A | b]``.  Every ``REINVERT_EVERY``
    pivots, and before optimality or unboundedness is accepted, the body is
    recomputed as ``B^{-1} W`` to discard accumulated rounding error.
    """

    def __init__(self, W: np.ndarray, basis: list[int], cost: np.ndarray):
        self.W = W
        self.basis = basis
        self.cost = cost
        self.T = np.zeros((W.shape[0] + 1, W.shape[1]))
        self.reinvert()

    def reinvert(self) -> None:
        R = len(self.basis)
        if R:
            try:
                self.T[:R] = np.linalg.solve(self.W[:, self.basis], self.W)
            except np.linalg.LinAlgError:
                raise SolverError("basis matrix became singular") from None
            rhs = self.T[:R, -1]
            rhs[(rhs < 0) & (rhs > -PIVOT_TOL)] = 0.0
        self.price()

    def price(self) -> None:
        R = len(self.basis)
        self.T[-1, :-1] = self.cost
        self.T[-1, -1] = 0.0
        if R:
            self.T[-1] -= self.cost[self.basis] @ self.T[:R]

    def pivot(self, r: int, e: int) -> None:
        T = self.T
        T[r] /= T[r, e]
        col = T[:, e].copy()
        col[r] = 0.0
        T -= np.outer(col, T[r])
        T[:, e] = 0.0
        T[r, e] = 1.0
        self.basis[r] = e

    def drop_rows(self, rows: list[int]) -> None:
        keep = [r for r in range(len(self.basis)) if r not in set(rows)]
        self.W = self.W[keep]
        self.basis = [self.basis[r] for r in keep]
        self.T = np.vstack([self.T[keep], self.T[-1:]])

    def drop_columns(self, start: int, stop: int) -> None:
        cols = [j for j in range(self.W.shape[1]) if not start <= j < stop]
        self.W = self.W[:, cols]
        self.cost = self.cost[[j for j in cols[:-1]]]
        self.T = self.T[:, cols]

    @property
    def objective(self) -> float:
        return -self.T[-1, -1]

    def run(self, n_enter: int, max_iter: int, it: int = 0) -> tuple[Status, int]:
        """Bland's rule: lowest-index improving column, lowest-index basic on ties."""
        since = 0
        while True:
            T = self.T
            candidates = np.flatnonzero(T[-1, :n_enter] < -PIVOT_TOL)
            if candidates.size == 0:
                if since:
                    self.reinvert()
                    since = 0
                    continue
                return Status.OPTIMAL, it
            e = int(candidates[0])
            col = T[:-1, e]
            rows = np.flatnonzero(col > PIVOT_TOL)
            if rows.size == 0:
                if since:
                    self.reinvert()
                    since = 0
                    continue
                return Status.UNBOUNDED, it
            ratios = T[rows, -1] / col[rows]
            best = ratios.min()
            tied = rows[ratios <= best + 1e-12 * max(1.0, abs(best))]
            leave = int(min(tied, key=lambda r: self.basis[r]))
            self.pivot(leave, e)
            it += 1
            since += 1
            if it > max_iter:
                raise CycleLimitExceeded(f"simplex exceeded {max_iter} pivots")
            if since >= REINVERT_EVERY:
                self.reinvert()
                since = 0


def _standard_form(problem: LpProblem):
    """Rewrite as ``min c_s @ z, A_s z = b_s, z >= 0`` with ``b_s >= 0``.

    Returns the pieces needed to map the solution and duals back.
    """
    n = problem.n_vars
    offset = np.zeros(n)
    blocks = []  # (original index, sign) per structural column
    upper_rows = []  # (structural column, rhs)
    for j, (lo, hi) in enumerate(problem.bounds):
        if np.isfinite(lo):
            offset[j] = lo
            if np.isfinite(hi):
                upper_rows.append((len(blocks), hi - lo))
            blocks.append((j, 1.0))
        elif np.isfinite(hi):
            offset[j] = hi
            blocks.append((j, -1.0))
        else:
            blocks.append((j, 1.0))
            blocks.append((j, -1.0))
    k = len(blocks)
    M = np.zeros((n, k))
    for col, (j, sign) in enumerate(blocks):
        M[j, col] = sign

    sign = -1.0 if problem.maximize else 1.0
    cmin = sign * problem.c
    A1 = problem.A @ M
    b1 = problem.b - problem.A @ offset
    senses = list(problem.senses)
    if upper_rows:
        U = np.zeros((len(upper_rows), k))
        for r, (col, rhs) in enumerate(upper_rows):
            U[r, col] = 1.0
        A1 = np.vstack([A1, U])
        b1 = np.concatenate([b1, [rhs for _, rhs in upper_rows]])
        senses += ["<="] * len(upper_rows)

    R = A1.shape[0]
    n_slack = sum(s != "=" for s in senses)
    S = np.zeros((R, n_slack))
    slack_of_row = [-1] * R
    s_idx = 0
    for r, s in enumerate(senses):
        if s != "=":
            S[r, s_idx] = 1.0 if s == "<=" else -1.0
            slack_of_row[r] = k + s_idx
            s_idx += 1
    A_s = np.hstack([A1, S])
    b_s = b1.copy()
    flip = np.where(b_s < 0, -1.0, 1.0)
    A_s *= flip[:, None]
    b_s *= flip
    c_s = np.concatenate([M.T @ cmin, np.zeros(n_slack)])
    return A_s, b_s, c_s, flip, slack_of_row, M, offset


def solve_lp(problem: LpProblem, tol: Tolerance = DEFAULT_TOL, max_iter: int | None = None) -> LpSolution:
    """Solve ``problem`` with the two-phase simplex method."""
    A_s, b_s, c_s, flip, slack_of_row, M, offset = _standard_form(problem)
    R, N = A_s.shape
    if max_iter is None:
        max_iter = 50 * (R + N) + 1000

    basis = []
    art_rows = []
    for r in range(R):
        s = slack_of_row[r]
        if s >= 0 and A_s[r, s] == 1.0:
            basis.append(s)
        else:
            basis.append(N + len(art_rows))
            art_rows.append(r)
    n_art = len(art_rows)

    W = np.zeros((R, N + n_art + 1))
    W[:, :N] = A_s
    W[:, -1] = b_s
    for a, r in enumerate(art_rows):
        W[r, N + a] = 1.0

    iterations = 0
    keep = list(range(R))
    if n_art:
        phase1 = np.concatenate([np.zeros(N), np.ones(n_art)])
        tab = _Tableau(W, basis, phase1)
        _, iterations = tab.run(N + n_art, max_iter)
        if tab.objective > tol.eps_feas * max(1.0, float(np.abs(b_s).max(initial=0.0))):
            return LpSolution(Status.INFEASIBLE, iterations=iterations)
        redundant = []
        for r in range(R):
            if tab.basis[r] >= N:
                cands = np.flatnonzero(np.abs(tab.T[r, :N]) > PIVOT_TOL)
                if cands.size == 0:
                    redundant.append(r)
                else:
                    tab.pivot(r, int(cands[0]))
        keep = [r for r in range(R) if r not in redundant]
        tab.drop_rows(redundant)
        tab.drop_columns(N, N + n_art)
        tab.cost = c_s.copy()
        tab.reinvert()
    else:
        tab = _Tableau(W, basis, c_s.copy())

    status, iterations = tab.run(N, max_iter, iterations)
    if status is Status.UNBOUNDED:
        return LpSolution(Status.UNBOUNDED, iterations=iterations)
    basis = tab.basis
    T = tab.T

    z = np.zeros(N)
    for r, bv in enumerate(basis):
        z[bv] = T[r, -1]
    z = np.maximum(z, 0.0)
    x = offset + M @ z[: M.shape[1]]

    y_std = np.zeros(R)
    if keep:
        B = A_s[np.ix_(keep, basis)]
        y_std[keep] = np.linalg.solve(B.T, c_s[basis])
    y = y_std * flip
    if problem.maximize:
        y = -y
    y_rows = y[: problem.n_rows]
    objective = float(problem.c @ x)
    return LpSolution(Status.OPTIMAL, x=x, y=y_rows, objective=objective, iterations=iterations)


def verify_lp_solution(problem: LpProblem, solution: LpSolution, tol: Tolerance = DEFAULT_TOL) -> LpCertificate:
    """Re-check primal feasibility, dual feasibility and the duality gap.

    Uses only ``problem`` and the returned ``x``/``y``; nothing from the
    tableau.  Bound duals are implied by the reduced costs.
    """
    if solution.status is not Status.OPTIMAL:
        raise ValidationError("only optimal solutions carry certificates")
    x, y = solution.x, solution.y
    A, b, c = problem.A, problem.b, problem.c
    lo = np.array([p[0] for p in problem.bounds])
    hi = np.array([p[1] for p in problem.bounds])

    ax = A @ x
    viol = []
    for r, s in enumerate(problem.senses):
        if s == "<=":
            viol.append(ax[r] - b[r])
        elif s == ">=":
            viol.append(b[r] - ax[r])
        else:
            viol.append(abs(ax[r] - b[r]))
    viol.extend(lo - x)
    viol.extend(x - hi)
    primal = max([0.0] + [float(v) for v in viol if np.isfinite(v)])

    sign = -1.0 if problem.maximize else 1.0
    cm, ym = sign * c, sign * y
    dual_viol = [0.0]
    for r, s in enumerate(problem.senses):
        if s == ">=":
            dual_viol.append(-ym[r])
        elif s == "<=":
            dual_viol.append(ym[r])
    reduced = cm - A.T @ ym
    dual_obj = float(b @ ym)
    for j, rj in enumerate(reduced):
        if rj > 0:
            if np.isfinite(lo[j]):
                dual_obj += lo[j] * rj
            else:
                dual_viol.append(rj)
        elif rj < 0:
            if np.isfinite(hi[j]):
                dual_obj += hi[j] * rj
            else:
                dual_viol.append(-rj)
    dual = max(float(v) for v in dual_viol)
    gap = abs(float(cm @ x) - dual_obj)
    ok = bool(primal <= tol.eps_feas and dual <= tol.eps_feas and gap <= tol.eps_opt)
    return LpCertificate(primal, dual, float(gap), ok)


# --------------------------------------------------------------------------
# zero-sum games


@dataclass(frozen=True, eq=False)
class GameSolution:
    """Mixed value of a zero-sum game; rows minimize, columns maximize."""

    value: float
    row_weights: Weights
    col_weights: Weights

    def guarantees(self, F) -> tuple[float, float]:
        """``(min_i (F mu)_i, max_j (lam^T F)_j)`` recomputed from scratch."""
        F = np.asarray(validate_bimatrix(F))
        return float((F @ self.col_weights).min()), float((self.row_weights @ F).max())

    def verify(self, F, tol: Tolerance = DEFAULT_TOL) -> bool:
        F = validate_bimatrix(F)
        if len(self.row_weights) != F.rows or len(self.col_weights) != F.cols:
            return False
        try:
            validate_weights(self.row_weights, F.rows, tol)
            validate_weights(self.col_weights, F.cols, tol)
        except ValidationError:
            return False
        lower, upper = self.guarantees(F)
        return upper <= self.value + tol.eps_cert and lower >= self.value - tol.eps_cert

    def to_dict(self) -> dict:
        return {
            "kind": "game_solution",
            "value": self.value,
            "row_weights": self.row_weights.tolist(),
            "col_weights": self.col_weights.tolist(),
        }

    @classmethod
    def from_dict(cls, payload: dict) -> "GameSolution":
        try:
            return cls(
                float(payload["value"]),
                np.asarray(payload["row_weights"], dtype=float),
                np.asarray(payload["col_weights"], dtype=float),
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise ValidationError(f"malformed game solution: {exc}") from None


def solve_zero_sum(F, tol: Tolerance = DEFAULT_TOL) -> GameSolution:
    """Optimal mixed strategies of the game ``F`` (rows minimize).

    The payoff is shifted so every entry is at least one, the minimizer's
    reciprocal-value LP ``max sum(x) s.t. F'^T x <= 1, x >= 0`` is solved, and
    the maximizer's strategy is read off the duals.
    """
    F = validate_bimatrix(F)
    data = np.asarray(F)
    shift = 1.0 - float(data.min())
    shifted = data + shift
    m, n = F.shape
    problem = LpProblem(c=np.ones(m), A=shifted.T, b=np.ones(n), senses=("<=",) * n, maximize=True)
    sol = solve_lp(problem, tol)
    if sol.status is not Status.OPTIMAL:
        raise SolverError(f"game LP returned {sol.status.value}")
    x = np.maximum(sol.x, 0.0)
    y = np.maximum(sol.y, 0.0)
    total = float(x.sum())
    lam = validate_weights(x / total, m, tol)
    mu = validate_weights(y / y.sum(), n, tol)
    value = 1.0 / total - shift
    result = GameSolution(value, lam, mu)
    lower, upper = result.guarantees(F)
    if upper - lower > tol.eps_opt:
        raise SolverError(f"mixed optima disagree: {lower!r} vs {upper!r}")
    return result
