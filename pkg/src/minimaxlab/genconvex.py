"""Generalized convexity classifiers for finite bivariate functions.

Conventions: rows are points of X, columns points of Y, and ``F`` is any
matrix accepted by :func:`~minimaxlab.core.validate_bimatrix`.

* t-convexlike on X: for every row pair (i1, i2) some row i3 satisfies
  ``F[i3] <= t*F[i1] + (1-t)*F[i2]`` componentwise.
* infsup-convex on X: mixing rows does not lower ``min_i max_j F``.

The s-concavelike / supinf-concave notions are the same tests applied to
``-F.T``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

import numpy as np

from .core import DEFAULT_TOL, BiMatrix, Tolerance, Weights, validate_bimatrix, validate_weights
from .exceptions import DepthTooLarge, NotTConvexlike, SOutOfRange, TOutOfRange, ValidationError
from .lp import solve_zero_sum

DEFAULT_SAMPLES = (0.25, 0.5, 0.75)
DEFAULT_COEFF_CAP = 10**6
_DEDUP_DIGITS = 12
_SCAN_BUDGET = 1 << 22  # floats per vectorized comparison block


@dataclass(frozen=True)
class ConvexityReport:
    property: str
    holds: bool
    t: float | None = None
    witness: dict | None = None
    lhs_value: float | None = None
    rhs_value: float | None = None

    def to_dict(self) -> dict:
        return {
            "property": self.property,
            "holds": self.holds,
            "t": self.t,
            "witness": self.witness,
            "lhs_value": self.lhs_value,
            "rhs_value": self.rhs_value,
        }


def _check_unit_interval(value, err):
    if not (0.0 < value < 1.0):
        raise err(f"parameter must lie strictly between 0 and 1, got {value!r}")


def _convexlike_scan(data: np.ndarray, t: float, eps: float):
    """Return ``(first failing pair, its mixture)`` or ``None`` if none fails.

    For every pair the candidate rows are scanned in index order; the search
    is vectorized over the third row and over columns.
    """
    m, n = data.shape
    block = max(1, _SCAN_BUDGET // (m * n))
    for i1 in range(m):
        for start in range(0, m, block):
            # mixtures of i1 with a block of i2 rows: shape (block, n)
            mix = t * data[i1] + (1.0 - t) * data[start : start + block]
            ok = np.all(data[None, :, :] <= mix[:, None, :] + eps, axis=2).any(axis=1)
            if not ok.all():
                i2 = start + int(np.flatnonzero(~ok)[0])
                return (i1, i2), mix[i2 - start]
    return None


def convexlike_witness(F, t: float, i1: int, i2: int, tol: Tolerance = DEFAULT_TOL) -> int | None:
    """Lowest row index dominated by the t-mixture of rows ``i1`` and ``i2``."""
    data = np.asarray(validate_bimatrix(F))
    mix = t * data[i1] + (1.0 - t) * data[i2]
    hits = np.flatnonzero(np.all(data <= mix + tol.eps_feas, axis=1))
    return int(hits[0]) if hits.size else None


def is_t_convexlike(F, t: float, tol: Tolerance = DEFAULT_TOL) -> ConvexityReport:
    _check_unit_interval(t, TOutOfRange)
    F = validate_bimatrix(F)
    failure = _convexlike_scan(np.asarray(F), t, tol.eps_feas)
    if failure is None:
        return ConvexityReport("t-convexlike", True, t=t)
    pair, mix = failure
    return ConvexityReport(
        "t-convexlike", False, t=t, witness={"pair": list(pair), "mixture": mix.tolist()}
    )


def is_s_concavelike(F, s: float, tol: Tolerance = DEFAULT_TOL) -> ConvexityReport:
    _check_unit_interval(s, SOutOfRange)
    F = validate_bimatrix(F)
    failure = _convexlike_scan(np.asarray(F.neg_transpose()), s, tol.eps_feas)
    if failure is None:
        return ConvexityReport("t-concavelike", True, t=s)
    pair, mix = failure
    return ConvexityReport(
        "t-concavelike", False, t=s, witness={"pair": list(pair), "mixture": (-mix).tolist()}
    )


def infsup_convex_value(F, tol: Tolerance = DEFAULT_TOL) -> float:
    """``min over row weights lam of max_j (lam^T F)_j``."""
    return solve_zero_sum(F, tol).value


def supinf_concave_value(F, tol: Tolerance = DEFAULT_TOL) -> float:
    """``max over column weights mu of min_i (F mu)_i``."""
    return solve_zero_sum(F, tol).value


def _value_report(name, pure, mixed, tol):
    holds = abs(pure - mixed) <= tol.eps_opt
    witness = None if holds else {"pure": pure, "mixed": mixed}
    return ConvexityReport(name, bool(holds), witness=witness, lhs_value=pure, rhs_value=mixed)


def is_infsup_convex(F, tol: Tolerance = DEFAULT_TOL, *, mixed: float | None = None) -> ConvexityReport:
    """Compare ``min_i max_j F`` with the mixed value.

    ``mixed`` may be supplied to reuse an already computed game value.
    """
    F = validate_bimatrix(F)
    upper = float(np.asarray(F).max(axis=1).min())
    if mixed is None:
        mixed = infsup_convex_value(F, tol)
    return _value_report("infsup-convex", upper, mixed, tol)


def is_supinf_concave(F, tol: Tolerance = DEFAULT_TOL, *, mixed: float | None = None) -> ConvexityReport:
    F = validate_bimatrix(F)
    lower = float(np.asarray(F).min(axis=0).max())
    if mixed is None:
        mixed = supinf_concave_value(F, tol)
    return _value_report("supinf-concave", lower, mixed, tol)


# --------------------------------------------------------------------------
# dense coefficient sets built from binary t-mixtures

# A mixture tree is either a vertex index (int) or a pair (left, right)
# meaning t*left + (1-t)*right.
MixtureTree = Union[int, tuple]


@dataclass(frozen=True, eq=False)
class DenseCoefficient:
    weights: Weights
    tree: MixtureTree

    @property
    def depth(self) -> int:
        return tree_depth(self.tree)


def tree_depth(tree: MixtureTree) -> int:
    if isinstance(tree, (int, np.integer)):
        return 0
    left, right = tree
    return 1 + max(tree_depth(left), tree_depth(right))


def evaluate_tree(tree: MixtureTree, t: float, n: int) -> np.ndarray:
    if isinstance(tree, (int, np.integer)):
        v = np.zeros(n)
        v[int(tree)] = 1.0
        return v
    left, right = tree
    return t * evaluate_tree(left, t, n) + (1.0 - t) * evaluate_tree(right, t, n)


def _key(v: np.ndarray) -> tuple:
    return tuple(np.round(v, _DEDUP_DIGITS) + 0.0)


def dense_coefficients(t: float, n: int, depth: int, cap: int = DEFAULT_COEFF_CAP) -> list[DenseCoefficient]:
    """Coefficient vectors reachable by binary t-mixture trees of depth <= ``depth``.

    Level d mixes every ordered pair from level d-1 (including a member with
    itself).  Duplicates are removed after rounding to 12 decimals; the
    shallowest tree found for a vector is kept.  Output order is the order of
    discovery, which is deterministic.
    """
    _check_unit_interval(t, TOutOfRange)
    if n < 1 or depth < 0:
        raise ValidationError("need n >= 1 and depth >= 0")
    found: dict[tuple, DenseCoefficient] = {}
    for k in range(n):
        v = np.zeros(n)
        v[k] = 1.0
        found[_key(v)] = DenseCoefficient(v, k)
    for _ in range(depth):
        level = list(found.values())
        if len(level) ** 2 + len(found) > cap:
            raise DepthTooLarge(f"enumeration would exceed {cap} vectors")
        W = np.array([c.weights for c in level])
        for a, left in enumerate(level):
            mixes = t * W[a] + (1.0 - t) * W
            for b, v in enumerate(mixes):
                key = _key(v)
                if key not in found:
                    found[key] = DenseCoefficient(v, (left.tree, level[b].tree))
        if len(found) == len(level):
            break
    for c in found.values():
        c.weights.setflags(write=False)
    return list(found.values())


def nearest_dense_coefficient(t: float, target, depth: int, cap: int = DEFAULT_COEFF_CAP):
    """Closest enumerated coefficient to ``target`` (max-norm) and the distance."""
    target = validate_weights(target, len(target))
    coeffs = dense_coefficients(t, len(target), depth, cap)
    W = np.array([c.weights for c in coeffs])
    dist = np.abs(W - target).max(axis=1)
    k = int(np.argmin(dist))
    return coeffs[k], float(dist[k])


def fact1_witness(F, t: float, rows, coeffs, tol: Tolerance = DEFAULT_TOL) -> int:
    """Row dominated by ``sum_k coeffs[k] * F[rows[k]]``.

    ``coeffs`` is a :class:`DenseCoefficient` (or a bare mixture tree); the
    tree is walked bottom-up, replacing each internal node by the pairwise
    t-convexlike witness of its two children.  The returned row satisfies the
    target inequality up to ``depth * eps_feas``.
    """
    F = validate_bimatrix(F)
    rows = [int(r) for r in rows]
    tree = coeffs.tree if isinstance(coeffs, DenseCoefficient) else coeffs

    def walk(node):
        if isinstance(node, (int, np.integer)):
            return rows[int(node)]
        a, b = walk(node[0]), walk(node[1])
        w = convexlike_witness(F, t, a, b, tol)
        if w is None:
            raise NotTConvexlike((a, b))
        return w

    return walk(tree)


def check_fact1(F, t: float, rows, coeffs: DenseCoefficient, witness: int, tol: Tolerance = DEFAULT_TOL) -> bool:
    """Direct re-verification of a :func:`fact1_witness` result."""
    data = np.asarray(validate_bimatrix(F))
    combo = np.asarray(coeffs.weights) @ data[list(rows)]
    return bool(np.all(data[witness] <= combo + max(coeffs.depth, 1) * tol.eps_feas))


@dataclass(frozen=True)
class Prop22Report:
    t: float
    convexlike: ConvexityReport
    infsup: ConvexityReport | None

    @property
    def vacuous(self) -> bool:
        return not self.convexlike.holds

    @property
    def passed(self) -> bool:
        return self.vacuous or self.infsup.holds

    def to_dict(self) -> dict:
        return {
            "t": self.t,
            "vacuous": self.vacuous,
            "passed": self.passed,
            "convexlike": self.convexlike.to_dict(),
            "infsup": None if self.infsup is None else self.infsup.to_dict(),
        }


def check_prop22(F, t: float, tol: Tolerance = DEFAULT_TOL) -> Prop22Report:
    """t-convexlike implies infsup-convex, tested on one instance."""
    F = validate_bimatrix(F)
    convexlike = is_t_convexlike(F, t, tol)
    infsup = is_infsup_convex(F, tol) if convexlike.holds else None
    return Prop22Report(t, convexlike, infsup)


def convexity_profile(F, ts=DEFAULT_SAMPLES, ss=DEFAULT_SAMPLES, tol: Tolerance = DEFAULT_TOL, *, mixed=None):
    """All classifier reports for the sampled parameters, in a fixed order."""
    F = validate_bimatrix(F)
    if mixed is None:
        mixed = solve_zero_sum(F, tol).value
    reports = [is_t_convexlike(F, t, tol) for t in ts]
    reports += [is_s_concavelike(F, s, tol) for s in ss]
    reports.append(is_infsup_convex(F, tol, mixed=mixed))
    reports.append(is_supinf_concave(F, tol, mixed=mixed))
    return reports
