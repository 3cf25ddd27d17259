"""Finite theorem of the alternative with checkable certificates.

A family is ``k`` generator functions sampled on ``m`` points (a ``k x m``
matrix); ``A`` is the convex hull of its rows.  Exactly one of

* **A1**: some convex combination of the generators is negative everywhere;
* **A2**: some probability vector on the points pairs nonnegatively with every
  generator

is reported, decided by the sign of the game value
``v = min_lam max_x (lam^T members)(x)``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import DEFAULT_TOL, Tolerance, Weights, validate_bimatrix, validate_weights
from .exceptions import ShapeMismatch, ValidationError
from .lp import solve_zero_sum

GRAY_ZONE_FACTOR = 10.0


@dataclass(frozen=True, eq=False)
class FunctionFamily:
    members: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "members", np.asarray(validate_bimatrix(self.members)))

    @property
    def generators(self) -> int:
        return self.members.shape[0]

    @property
    def points(self) -> int:
        return self.members.shape[1]

    def to_dict(self) -> dict:
        return {
            "kind": "family",
            "generators": self.generators,
            "points": self.points,
            "members": self.members.tolist(),
        }

    @classmethod
    def from_dict(cls, payload: dict) -> "FunctionFamily":
        if payload.get("kind") != "family":
            raise ValidationError(f"expected kind 'family', got {payload.get('kind')!r}")
        for key in ("generators", "points", "members"):
            if key not in payload:
                raise ValidationError(f"missing field {key!r}")
        fam = cls(payload["members"])
        if (fam.generators, fam.points) != (payload["generators"], payload["points"]):
            raise ValidationError(
                f"declared shape ({payload['generators']}, {payload['points']}) "
                f"does not match members {fam.members.shape}"
            )
        return fam


@dataclass(frozen=True, eq=False)
class AlternativeOutcome:
    tag: str  # "A1" or "A2"
    margin: float
    combo: Weights | None = None
    sup_value: float | None = None
    measure: Weights | None = None
    min_pairing: float | None = None

    def in_gray_zone(self, tol: Tolerance = DEFAULT_TOL) -> bool:
        return self.margin <= GRAY_ZONE_FACTOR * tol.eps_opt

    def to_dict(self) -> dict:
        out = {"kind": "alternative_outcome", "tag": self.tag, "margin": self.margin}
        if self.tag == "A1":
            out.update(combo=self.combo.tolist(), sup_value=self.sup_value)
        else:
            out.update(measure=self.measure.tolist(), min_pairing=self.min_pairing)
        return out

    @classmethod
    def from_dict(cls, payload: dict) -> "AlternativeOutcome":
        try:
            tag = payload["tag"]
            margin = float(payload["margin"])
            if tag == "A1":
                return cls(tag, margin, combo=np.asarray(payload["combo"], float),
                           sup_value=float(payload["sup_value"]))
            if tag == "A2":
                return cls(tag, margin, measure=np.asarray(payload["measure"], float),
                           min_pairing=float(payload["min_pairing"]))
        except (KeyError, TypeError, ValueError) as exc:
            raise ValidationError(f"malformed alternative outcome: {exc}") from None
        raise ValidationError(f"unknown tag {payload.get('tag')!r}")


def _family(family) -> FunctionFamily:
    return family if isinstance(family, FunctionFamily) else FunctionFamily(family)


def decide_alternative(family, tol: Tolerance = DEFAULT_TOL) -> AlternativeOutcome:
    """Return A1 when the game value is below ``-eps_feas``, else A2.

    Values at or near zero land in A2, whose certificate survives them.
    """
    family = _family(family)
    M = family.members
    game = solve_zero_sum(M, tol)
    v = game.value
    if v < -tol.eps_feas:
        combo = game.row_weights
        return AlternativeOutcome("A1", abs(v), combo=combo, sup_value=float((combo @ M).max()))
    measure = game.col_weights
    return AlternativeOutcome("A2", abs(v), measure=measure, min_pairing=float((M @ measure).min()))


def verify_certificate(outcome: AlternativeOutcome, family, tol: Tolerance = DEFAULT_TOL) -> bool:
    """Recompute the certificate from the raw family with plain scans."""
    family = _family(family)
    M = family.members
    if outcome.tag == "A1":
        if outcome.combo is None or len(outcome.combo) != family.generators:
            raise ShapeMismatch("combination length does not match generator count")
        try:
            validate_weights(outcome.combo, family.generators, tol)
        except ValidationError:
            return False
        sup = float((np.asarray(outcome.combo) @ M).max())
        return sup < -tol.eps_feas and abs(sup - outcome.sup_value) <= tol.eps_cert
    if outcome.tag == "A2":
        if outcome.measure is None or len(outcome.measure) != family.points:
            raise ShapeMismatch("measure length does not match point count")
        if not dual_cone_membership(outcome.measure, tol):
            return False
        pairings = M @ np.asarray(outcome.measure)
        return bool(pairings.min() >= -tol.eps_cert)
    return False


def dual_cone_membership(nu, tol: Tolerance = DEFAULT_TOL) -> bool:
    """Nonnegative on the positive cone and ``<nu, 1> = 1``: a probability vector."""
    nu = np.asarray(nu, dtype=float).ravel()
    if nu.size == 0 or not np.all(np.isfinite(nu)):
        return False
    return bool(np.all(nu >= -tol.eps_feas) and abs(nu.sum() - 1.0) <= tol.eps_feas)
