"""Convex combinations of a sampled function sequence with small sup-norm.

A :class:`SampledSequence` holds ``data[n, z, c] = f_n(z)_c`` for ``N``
functions on ``Z`` sample points with values in R^d (max-norm).  Function
indices in windows are 1-based, so ``[1, N]`` is the whole sequence.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .core import DEFAULT_TOL, Tolerance, Weights, validate_weights
from .exceptions import BadWindow, ValidationError
from .lp import solve_zero_sum


@dataclass(frozen=True, eq=False)
class SampledSequence:
    data: np.ndarray

    def __post_init__(self):
        arr = np.array(self.data, dtype=float)
        if arr.ndim == 2:
            arr = arr[:, :, None]
        if arr.ndim != 3 or min(arr.shape) < 1:
            raise ValidationError(f"sequence data must be N x Z x d with all sizes >= 1, got {arr.shape}")
        if not np.all(np.isfinite(arr)):
            raise ValidationError("sequence data must be finite")
        arr.setflags(write=False)
        object.__setattr__(self, "data", arr)

    @property
    def N(self) -> int:
        return self.data.shape[0]

    @property
    def Z(self) -> int:
        return self.data.shape[1]

    @property
    def d(self) -> int:
        return self.data.shape[2]

    def to_dict(self) -> dict:
        return {"kind": "sequence", "N": self.N, "Z": self.Z, "d": self.d, "data": self.data.tolist()}

    @classmethod
    def from_dict(cls, payload: dict) -> "SampledSequence":
        if payload.get("kind") != "sequence":
            raise ValidationError(f"expected kind 'sequence', got {payload.get('kind')!r}")
        for key in ("N", "Z", "d", "data"):
            if key not in payload:
                raise ValidationError(f"missing field {key!r}")
        try:
            seq = cls(payload["data"])
        except (TypeError, ValueError) as exc:
            raise ValidationError(f"malformed sequence data: {exc}") from None
        if (seq.N, seq.Z, seq.d) != (payload["N"], payload["Z"], payload["d"]):
            raise ValidationError(
                f"declared shape ({payload['N']}, {payload['Z']}, {payload['d']}) does not match data {seq.data.shape}"
            )
        return seq

    @classmethod
    def from_csv_rows(cls, rows: Iterable[list[str]]) -> "SampledSequence":
        """Rows ``n, z, v_1, ..., v_d``; an optional non-numeric header is skipped.

        ``n`` and ``z`` are integer labels; functions and points are ordered
        by label and every ``(n, z)`` pair must appear exactly once.
        """
        records = {}
        width = None
        for lineno, row in enumerate(rows, 1):
            if not row or all(not c.strip() for c in row):
                continue
            try:
                n, z = int(row[0]), int(row[1])
                values = [float(v) for v in row[2:]]
            except (ValueError, IndexError):
                if lineno == 1:
                    continue
                raise ValidationError(f"line {lineno}: expected n, z, values") from None
            if not values:
                raise ValidationError(f"line {lineno}: no value columns")
            if width is None:
                width = len(values)
            elif len(values) != width:
                raise ValidationError(f"line {lineno}: expected {width} value columns, got {len(values)}")
            if (n, z) in records:
                raise ValidationError(f"line {lineno}: duplicate entry for n={n}, z={z}")
            records[(n, z)] = values
        if not records:
            raise ValidationError("no data rows")
        ns = sorted({k[0] for k in records})
        zs = sorted({k[1] for k in records})
        if len(records) != len(ns) * len(zs):
            raise ValidationError("CSV does not cover every (n, z) combination")
        return cls([[records[(n, z)] for z in zs] for n in ns])

    @classmethod
    def from_csv(cls, path) -> "SampledSequence":
        with open(path, newline="") as fh:
            return cls.from_csv_rows(csv.reader(fh))


@dataclass(frozen=True, eq=False)
class MazurResult:
    tail_start: int
    window_end: int
    weights: Weights
    norm: float

    def combination(self, seq: SampledSequence) -> np.ndarray:
        block = seq.data[self.tail_start - 1 : self.window_end]
        return np.tensordot(self.weights, block, axes=1)

    def verify(self, seq: SampledSequence, tol: Tolerance = DEFAULT_TOL) -> bool:
        if not (1 <= self.tail_start <= self.window_end <= seq.N):
            return False
        try:
            validate_weights(self.weights, self.window_end - self.tail_start + 1, tol)
        except ValidationError:
            return False
        achieved = float(np.abs(self.combination(seq)).max())
        return self.norm >= 0 and abs(achieved - self.norm) <= tol.eps_cert

    def to_dict(self) -> dict:
        return {
            "kind": "mazur_result",
            "tail_start": self.tail_start,
            "window_end": self.window_end,
            "weights": self.weights.tolist(),
            "norm": self.norm,
        }

    @classmethod
    def from_dict(cls, payload: dict) -> "MazurResult":
        try:
            return cls(
                int(payload["tail_start"]),
                int(payload["window_end"]),
                np.asarray(payload["weights"], dtype=float),
                float(payload["norm"]),
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise ValidationError(f"malformed mazur result: {exc}") from None


def _as_sequence(seq) -> SampledSequence:
    return seq if isinstance(seq, SampledSequence) else SampledSequence(seq)


def mazur_extract(seq, m: int, w: int, tol: Tolerance = DEFAULT_TOL) -> MazurResult:
    """Minimum sup-norm over convex combinations of ``f_m, ..., f_w``.

    ``min_lam max_{z,c} |sum_n lam_n f_n(z)_c|`` is the value of the zero-sum
    game whose rows are the functions and whose columns are the signed
    evaluations ``+f_n(z)_c`` and ``-f_n(z)_c``; it is solved with
    :func:`~minimaxlab.lp.solve_zero_sum`.  The reported norm is recomputed
    from the returned weights.
    """
    seq = _as_sequence(seq)
    if not (1 <= m <= w <= seq.N):
        raise BadWindow(f"window [{m}, {w}] not inside [1, {seq.N}]")
    block = seq.data[m - 1 : w]
    k = block.shape[0]
    D = block.reshape(k, -1)
    game = solve_zero_sum(np.hstack([D, -D]), tol)
    weights = game.row_weights
    norm = float(np.abs(np.tensordot(weights, block, axes=1)).max())
    return MazurResult(m, w, weights, norm)


@dataclass(frozen=True, eq=False)
class ScheduleStep:
    target: float
    met: bool
    result: MazurResult

    def to_dict(self) -> dict:
        return {"target": self.target, "met": self.met, "result": self.result.to_dict()}


def mazur_schedule(seq, targets, tol: Tolerance = DEFAULT_TOL, *, policy: str = "tail") -> list[ScheduleStep]:
    """Successive combinations meeting decreasing norm targets.

    ``policy="tail"`` fixes the window end at ``N`` and advances the tail
    start; ``policy="grow"`` keeps the tail start and widens the window.
    Each target's scan resumes where the previous one stopped.  Unreachable
    targets yield ``met=False`` with the smallest norm seen.
    """
    seq = _as_sequence(seq)
    targets = [float(t) for t in targets]
    if any(t <= 0 for t in targets) or any(b >= a for a, b in zip(targets, targets[1:])):
        raise ValidationError("targets must be positive and strictly decreasing")
    if policy not in ("tail", "grow"):
        raise ValidationError(f"unknown policy {policy!r}")
    N = seq.N
    cache: dict[tuple[int, int], MazurResult] = {}

    def solve(m, w):
        if (m, w) not in cache:
            cache[(m, w)] = mazur_extract(seq, m, w, tol)
        return cache[(m, w)]

    steps = []
    m, w = 1, (N if policy == "tail" else 1)
    for target in targets:
        best = None
        met = None
        while True:
            res = solve(m, w)
            if best is None or res.norm < best.norm:
                best = res
            if res.norm <= target:
                met = res
                break
            if policy == "tail":
                # the optimum is nondecreasing in m, so later tails cannot succeed
                break
            else:
                if w == N:
                    break
                w += 1
        if met is not None:
            steps.append(ScheduleStep(target, True, met))
        else:
            steps.append(ScheduleStep(target, False, best))
    return steps


def pointwise_decay_report(seq, tails=None) -> tuple[np.ndarray, np.ndarray]:
    """Tail magnitudes ``max_{n >= m} max_c |f_n(z)_c|`` for each tail start ``m``.

    Returns ``(tails, table)`` with ``table[k, z]`` for ``tails[k]`` (1-based).
    """
    seq = _as_sequence(seq)
    mags = np.abs(seq.data).max(axis=2)
    suffix = np.maximum.accumulate(mags[::-1], axis=0)[::-1]
    tails = np.arange(1, seq.N + 1) if tails is None else np.asarray(tails, dtype=int)
    if tails.size and (tails.min() < 1 or tails.max() > seq.N):
        raise BadWindow(f"tail starts must lie in [1, {seq.N}]")
    return tails, suffix[tails - 1]
