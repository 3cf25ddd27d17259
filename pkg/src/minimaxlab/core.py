"""Instance model, tolerance policy and validation helpers.

A :class:`BiMatrix` stores a bivariate function on finite index sets,
``data[i, j] = f(x_i, y_j)``.  Rows are the X side (the minimizer), columns
the Y side (the maximizer).  Probability vectors ("weights") are plain
read-only ``numpy`` arrays produced by :func:`validate_weights`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Sequence

import numpy as np

from .exceptions import (
    EmptyDimension,
    IndexOutOfRange,
    LengthMismatch,
    NegativeWeight,
    NonFiniteEntry,
    RaggedRows,
    SumNotOne,
    ValidationError,
)

#: Largest row/column count any generator or CLI path accepts.
MAX_DIM = 2000

Weights = np.ndarray


@dataclass(frozen=True)
class Tolerance:
    """Absolute tolerances used by every comparison in the package.

    eps_feas
        Feasibility slack (weights, convexlike witnesses, LP rows).
    eps_opt
        Duality-gap tolerance; two optimal values "agree" within it.
    eps_cert
        Slack allowed when re-verifying a certificate from scratch.
    """

    eps_feas: float = 1e-9
    eps_opt: float = 1e-7
    eps_cert: float = 1e-7

    def __post_init__(self):
        for name in ("eps_feas", "eps_opt", "eps_cert"):
            value = getattr(self, name)
            if not (np.isfinite(value) and value > 0):
                raise ValidationError(f"{name} must be a positive finite number, got {value!r}")
        if self.eps_feas > self.eps_cert:
            raise ValidationError("eps_feas must not exceed eps_cert")

    def to_dict(self) -> dict:
        return {"eps_feas": self.eps_feas, "eps_opt": self.eps_opt, "eps_cert": self.eps_cert}


DEFAULT_TOL = Tolerance()


def _readonly(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=float, copy=True)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class BiMatrix:
    """Validated dense ``rows x cols`` matrix of finite reals.

    Build instances through :func:`validate_bimatrix`; the constructor trusts
    its input apart from freezing a private copy.
    """

    data: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "data", _readonly(self.data))

    @property
    def rows(self) -> int:
        return self.data.shape[0]

    @property
    def cols(self) -> int:
        return self.data.shape[1]

    @property
    def shape(self) -> tuple[int, int]:
        return self.data.shape

    def __array__(self, dtype=None, copy=None):
        if dtype is None:
            return self.data
        return self.data.astype(dtype)

    def __eq__(self, other):
        if not isinstance(other, BiMatrix):
            return NotImplemented
        return self.shape == other.shape and bool(np.array_equal(self.data, other.data))

    def __hash__(self):
        return hash((self.shape, self.data.tobytes()))

    def __repr__(self):
        return f"BiMatrix({self.rows}x{self.cols})"

    def neg_transpose(self) -> "BiMatrix":
        """Return ``-F^T``; swaps the roles of the minimizer and maximizer."""
        return BiMatrix(-self.data.T)

    def to_dict(self) -> dict:
        return {"kind": "bimatrix", "rows": self.rows, "cols": self.cols, "data": self.data.tolist()}

    @classmethod
    def from_dict(cls, payload: dict) -> "BiMatrix":
        if payload.get("kind") != "bimatrix":
            raise ValidationError(f"field 'kind': expected 'bimatrix', got {payload.get('kind')!r}")
        for key in ("rows", "cols", "data"):
            if key not in payload:
                raise ValidationError(f"missing field {key!r}")
        try:
            F = validate_bimatrix(payload["data"])
        except ValidationError as exc:
            exc.args = (f"field 'data': {exc}",)
            raise
        if F.shape != (payload["rows"], payload["cols"]):
            raise RaggedRows(
                f"fields 'rows'/'cols': declared shape ({payload['rows']}, {payload['cols']}) "
                f"does not match data {F.shape}"
            )
        return F


def validate_bimatrix(candidate: Any) -> BiMatrix:
    """Validate raw matrix data (nested lists, array or ``BiMatrix``)."""
    if isinstance(candidate, BiMatrix):
        return candidate
    if isinstance(candidate, np.ndarray):
        arr = candidate
    else:
        if candidate is None or len(candidate) == 0:
            raise EmptyDimension("matrix has no rows")
        rows = [list(r) if not np.isscalar(r) else None for r in candidate]
        if any(r is None for r in rows):
            raise RaggedRows("matrix rows must be sequences")
        widths = {len(r) for r in rows}
        if len(widths) != 1:
            raise RaggedRows(f"rows have differing lengths {sorted(widths)}")
        try:
            arr = np.array(rows, dtype=float)
        except (TypeError, ValueError) as exc:
            raise ValidationError(f"matrix entries must be real numbers: {exc}") from None
    if arr.ndim != 2:
        raise RaggedRows(f"expected a 2-D matrix, got {arr.ndim} dimension(s)")
    if arr.shape[0] == 0 or arr.shape[1] == 0:
        raise EmptyDimension(f"matrix shape {arr.shape} has an empty dimension")
    try:
        arr = arr.astype(float)
    except (TypeError, ValueError) as exc:
        raise ValidationError(f"matrix entries must be real numbers: {exc}") from None
    bad = np.argwhere(~np.isfinite(arr))
    if bad.size:
        i, j = (int(v) for v in bad[0])
        raise NonFiniteEntry(i, j)
    return BiMatrix(arr)


def validate_weights(candidate: Sequence[float], expected_len: int, tol: Tolerance = DEFAULT_TOL) -> Weights:
    """Validate a probability vector.

    Components in ``[-eps_feas, 0)`` are treated as solver noise: they are
    set to zero and the vector is renormalized.  Anything more negative is
    rejected, as is a total further than ``eps_feas`` from one.
    """
    w = np.array(candidate, dtype=float).ravel()
    if w.shape[0] != expected_len:
        raise LengthMismatch(f"expected {expected_len} weights, got {w.shape[0]}")
    if not np.all(np.isfinite(w)):
        raise ValidationError("weights must be finite")
    below = np.flatnonzero(w < -tol.eps_feas)
    if below.size:
        k = int(below[0])
        raise NegativeWeight(k, float(w[k]))
    total = float(w.sum())
    if abs(total - 1.0) > tol.eps_feas:
        raise SumNotOne(total)
    dust = w < 0
    if dust.any():
        w[dust] = 0.0
        w = w / w.sum()
    return _readonly(w)


@dataclass(frozen=True)
class IndexSequence:
    """Eventually periodic row sequence ``prefix + cycle + cycle + ...``."""

    cycle: tuple[int, ...]
    prefix: tuple[int, ...] = field(default=())

    def __post_init__(self):
        object.__setattr__(self, "cycle", tuple(int(i) for i in self.cycle))
        object.__setattr__(self, "prefix", tuple(int(i) for i in self.prefix))
        if not self.cycle:
            raise ValidationError("cycle must be nonempty")

    def validate_for(self, F: BiMatrix) -> "IndexSequence":
        for i in self.prefix + self.cycle:
            if not 0 <= i < F.rows:
                raise IndexOutOfRange(f"row index {i} outside [0, {F.rows})")
        return self

    def take(self, count: int) -> list[int]:
        """First ``count`` terms of the sequence."""
        out = list(self.prefix[:count])
        while len(out) < count:
            out.extend(self.cycle[: count - len(out)])
        return out
