"""Pure and mixed minimax values and executable minimax-theorem checks.

Each ``check_*`` function evaluates the hypotheses of one theorem on a finite
instance and, when they all hold, its conclusion.  Hypotheses that are
automatic for finite index sets (compactness, semicontinuity, boundedness,
equicontinuity, the Simons-like inequality) are listed with the detail
``"satisfied-by-finiteness"`` rather than left out.  A check never raises on
a failed hypothesis; it returns ``vacuous=True`` instead.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .core import DEFAULT_TOL, BiMatrix, IndexSequence, Tolerance, Weights, validate_bimatrix
from .exceptions import ShapeMismatch
from .genconvex import is_infsup_convex, is_supinf_concave, is_t_convexlike
from .lp import GameSolution, solve_zero_sum

BY_FINITENESS = "satisfied-by-finiteness"


@dataclass(frozen=True)
class Hypothesis:
    name: str
    satisfied: bool
    detail: str = ""

    def to_dict(self) -> dict:
        return {"name": self.name, "satisfied": self.satisfied, "detail": self.detail}


@dataclass(frozen=True)
class TheoremCheck:
    theorem: str
    hypotheses: tuple
    conclusion_holds: bool
    numbers: dict = field(default_factory=dict)

    @property
    def vacuous(self) -> bool:
        return not all(h.satisfied for h in self.hypotheses)

    @property
    def violated(self) -> bool:
        """True only for a genuine counterexample: hypotheses hold, conclusion fails."""
        return not self.vacuous and not self.conclusion_holds

    def to_dict(self) -> dict:
        return {
            "theorem": self.theorem,
            "hypotheses": [h.to_dict() for h in self.hypotheses],
            "vacuous": self.vacuous,
            "conclusion_holds": self.conclusion_holds,
            "numbers": self.numbers,
        }


def _finite(name: str) -> Hypothesis:
    return Hypothesis(name, True, BY_FINITENESS)


def _from_report(name: str, report) -> Hypothesis:
    if report.lhs_value is not None:
        detail = f"pure={report.lhs_value!r} mixed={report.rhs_value!r}"
    elif report.holds:
        detail = f"t={report.t}"
    else:
        detail = f"t={report.t} failing pair {report.witness['pair']}"
    return Hypothesis(name, report.holds, detail)


# --------------------------------------------------------------------------
# values


def pure_values(F) -> tuple[float, float]:
    """``(max_j min_i F, min_i max_j F)``."""
    data = np.asarray(validate_bimatrix(F))
    return float(data.min(axis=0).max()), float(data.max(axis=1).min())


@dataclass(frozen=True, eq=False)
class ValueReport:
    lower: float
    upper: float
    mixed: float
    row_weights: Weights
    col_weights: Weights

    @property
    def gap(self) -> float:
        return self.upper - self.lower

    @property
    def solution(self) -> GameSolution:
        return GameSolution(self.mixed, self.row_weights, self.col_weights)

    def to_dict(self) -> dict:
        return {
            "lower": self.lower,
            "mixed": self.mixed,
            "upper": self.upper,
            "gap": self.gap,
            "row_weights": self.row_weights.tolist(),
            "col_weights": self.col_weights.tolist(),
        }


def value_report(F, tol: Tolerance = DEFAULT_TOL) -> ValueReport:
    F = validate_bimatrix(F)
    lower, upper = pure_values(F)
    game = solve_zero_sum(F, tol)
    return ValueReport(lower, upper, game.value, game.row_weights, game.col_weights)


def check_lem2(F, tol: Tolerance = DEFAULT_TOL, *, report: ValueReport | None = None) -> TheoremCheck:
    """Attaining measures for the mixed values.

    (i) infsup-convex F: the maximizer's optimal mixture ``nu`` has
    ``min_i (F nu)_i`` equal to the pure upper value.
    (ii) supinf-concave F: the minimizer's mixture attains the pure lower value.
    The check is vacuous only when neither convexity hypothesis holds.
    """
    F = validate_bimatrix(F)
    data = np.asarray(F)
    if report is None:
        report = value_report(F, tol)
    infsup = is_infsup_convex(F, tol, mixed=report.mixed)
    supinf = is_supinf_concave(F, tol, mixed=report.mixed)
    attained_upper = float((data @ report.col_weights).min())
    attained_lower = float((report.row_weights @ data).max())
    ok_i = abs(attained_upper - report.upper) <= tol.eps_opt
    ok_ii = abs(attained_lower - report.lower) <= tol.eps_opt
    conclusion = (not infsup.holds or ok_i) and (not supinf.holds or ok_ii)
    either = infsup.holds or supinf.holds
    hyps = (
        Hypothesis(
            "infsup-convex on X or supinf-concave on Y",
            either,
            f"infsup-convex={infsup.holds} supinf-concave={supinf.holds}",
        ),
        _finite("bounded"),
    )
    numbers = {
        "upper": report.upper,
        "lower": report.lower,
        "mixed": report.mixed,
        "attained_by_col_weights": attained_upper,
        "attained_by_row_weights": attained_lower,
    }
    return TheoremCheck("lem2", hyps, bool(conclusion), numbers)


# --------------------------------------------------------------------------
# Simons-like inequality


def limsup_over_sequence(F, seq: IndexSequence) -> np.ndarray:
    """Per-column limsup along an eventually periodic row sequence.

    Only rows visited infinitely often matter, so this is the columnwise max
    over the cycle; the prefix is ignored.
    """
    F = validate_bimatrix(F)
    seq.validate_for(F)
    return np.asarray(F)[list(seq.cycle)].max(axis=0)


def simons_like_check(F, seq: IndexSequence, tol: Tolerance = DEFAULT_TOL) -> tuple[bool, float]:
    """``min_i max_j F <= max_j limsup(F, seq)[j]``; returns ``(holds, rhs - lhs)``."""
    F = validate_bimatrix(F)
    rhs = float(limsup_over_sequence(F, seq).max())
    lhs = pure_values(F)[1]
    slack = rhs - lhs
    return bool(slack >= -tol.eps_feas), slack


def _sampled_simons(data: np.ndarray, max_cycle: int) -> tuple[int, float]:
    """Minimum Simons-like slack over every row set of size <= ``max_cycle``.

    A cycle's limsup depends only on the set of rows it visits, so the sets
    cover every cycle of length <= ``max_cycle``.
    """
    rowmax = data.max(axis=1)
    upper = rowmax.min()
    m = data.shape[0]
    count, worst = 0, np.inf
    for size in range(1, min(max_cycle, m) + 1):
        combos = np.array(list(itertools.combinations(range(m), size)))
        sup_limsup = rowmax[combos].max(axis=1)
        count += len(combos)
        worst = min(worst, float((sup_limsup - upper).min()))
    return count, worst


# --------------------------------------------------------------------------
# theorem checks


def witness_row(F, t: float, tol: Tolerance = DEFAULT_TOL) -> tuple[int, TheoremCheck]:
    """Constant-sequence witness for the net lemma.

    The constant sequence at ``argmin_i max_j F`` plays the role of the net;
    when F is t-convexlike its ``max_j`` must not exceed the mixed max-min.
    """
    F = validate_bimatrix(F)
    data = np.asarray(F)
    rowmax = data.max(axis=1)
    i_star = int(np.argmin(rowmax))
    convexlike = is_t_convexlike(F, t, tol)
    hyps = (_from_report("t-convexlike on X", convexlike), _finite("bounded on X"))
    lhs = float(rowmax[i_star])
    numbers = {"t": t, "row": i_star, "sup_limsup": lhs}
    holds = True
    if convexlike.holds:
        rhs = solve_zero_sum(F, tol).value
        numbers["supinf_concave_value"] = rhs
        holds = lhs <= rhs + tol.eps_opt
    return i_star, TheoremCheck("corollary0", hyps, bool(holds), numbers)


def _same_shape(F: BiMatrix, G: BiMatrix):
    if F.shape != G.shape:
        raise ShapeMismatch(f"shapes differ: {F.shape} vs {G.shape}")


def _dominated(F: BiMatrix, G: BiMatrix, tol: Tolerance) -> Hypothesis:
    excess = float((np.asarray(F) - np.asarray(G)).max())
    return Hypothesis("f <= g", excess <= tol.eps_feas, f"max(f - g)={excess!r}")


def _two_function(theorem, F, G, first_hyps, tol, t=None):
    lower_g = pure_values(G)[0]
    upper_f = pure_values(F)[1]
    numbers = {"inf_sup_f": upper_f, "sup_inf_g": lower_g}
    if t is not None:
        numbers["t"] = t
    holds = upper_f <= lower_g + tol.eps_opt
    return TheoremCheck(theorem, tuple(first_hyps), bool(holds), numbers)


def check_km1(F, G, t: float, tol: Tolerance = DEFAULT_TOL) -> TheoremCheck:
    """Two-function minimax inequality under the Simons-like inequality."""
    F, G = validate_bimatrix(F), validate_bimatrix(G)
    _same_shape(F, G)
    hyps = [
        _from_report("f t-convexlike on X", is_t_convexlike(F, t, tol)),
        _finite("f bounded on X"),
        _finite("simons-like inequality"),
        _from_report("g supinf-concave on Y", is_supinf_concave(G, tol)),
        _dominated(F, G, tol),
    ]
    return _two_function("km1", F, G, hyps, tol, t)


def check_app2(F, G, t: float, tol: Tolerance = DEFAULT_TOL) -> TheoremCheck:
    """Compact/lower-semicontinuous variant; on finite X it reduces to km1."""
    F, G = validate_bimatrix(F), validate_bimatrix(G)
    _same_shape(F, G)
    hyps = [
        _finite("X compact Hausdorff"),
        _from_report("f t-convexlike on X", is_t_convexlike(F, t, tol)),
        _finite("f lower semicontinuous on X"),
        _finite("f, g bounded on X"),
        _from_report("g supinf-concave on Y", is_supinf_concave(G, tol)),
        _dominated(F, G, tol),
    ]
    return _two_function("app2", F, G, hyps, tol, t)


def check_cor_equic(H, L, tol: Tolerance = DEFAULT_TOL) -> TheoremCheck:
    """Two-function inequality for infsup-convex H and supinf-concave L."""
    H, L = validate_bimatrix(H), validate_bimatrix(L)
    _same_shape(H, L)
    hyps = [
        _from_report("h infsup-convex on X", is_infsup_convex(H, tol)),
        _finite("h bounded on X x Y"),
        _finite("{h(x, .)} equicontinuous on Y"),
        _finite("Y pseudocompact"),
        _from_report("l supinf-concave on Y", is_supinf_concave(L, tol)),
        _finite("l bounded on X"),
        _dominated(H, L, tol),
    ]
    return _two_function("cor_equic", H, L, hyps, tol)


def check_km2(F, t: float, tol: Tolerance = DEFAULT_TOL, *, max_cycle: int = 3) -> TheoremCheck:
    """One-function minimax equality for t-convexlike, supinf-concave F.

    Also samples the Simons-like inequality over every cycle of length
    ``<= max_cycle``.
    """
    F = validate_bimatrix(F)
    data = np.asarray(F)
    lower, upper = pure_values(F)
    convexlike = is_t_convexlike(F, t, tol)
    supinf = is_supinf_concave(F, tol)
    count, worst = _sampled_simons(data, max_cycle)
    simons_ok = worst >= -tol.eps_feas
    hyps = (
        _from_report("f t-convexlike on X", convexlike),
        _finite("f bounded on X"),
        _from_report("f supinf-concave on Y", supinf),
    )
    numbers = {
        "t": t,
        "upper": upper,
        "lower": lower,
        "gap": upper - lower,
        "sequences_checked": count,
        "min_simons_slack": worst,
    }
    holds = abs(upper - lower) <= tol.eps_opt and simons_ok
    return TheoremCheck("km2", hyps, bool(holds), numbers)
