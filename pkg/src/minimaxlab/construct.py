"""Instance generators with minimax guarantees built in.

The central construction is the discrete inf-convolution

    f[x, y] = min_z ( g[z, y] + K * phi[x, z] ),  phi[x, z] = max(xi[x] - xi[z], 0)

which is t-convexlike for every t: for any two rows, the one with the
smaller ``xi`` value is dominated by their mixture.  The mirrored
sup-convolution produces s-concavelike matrices.  :func:`gen_instance` wraps
both into seeded, reproducible generators that record which properties each
instance satisfies by construction.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .core import DEFAULT_TOL, MAX_DIM, BiMatrix, Tolerance, validate_bimatrix
from .exceptions import LengthMismatch, NegativeK, ShapeCap, ValidationError

KINDS = ("random", "convexlike", "concavelike", "two_function", "km2_ready")

_CHUNK = 1 << 22


def _xi_vector(xi, name="xi") -> np.ndarray:
    v = np.asarray(xi, dtype=float).ravel()
    if v.size == 0:
        raise ValidationError(f"{name} must be nonempty")
    if not np.all(np.isfinite(v)):
        raise ValidationError(f"{name} must be finite")
    return v


def _check_k(K: float) -> float:
    K = float(K)
    if not np.isfinite(K) or K < 0:
        raise NegativeK(f"K must be a finite nonnegative number, got {K!r}")
    return K


def phi_from_xi(xi) -> np.ndarray:
    """``phi[x, z] = max(xi[x] - xi[z], 0)``."""
    v = _xi_vector(xi)
    return np.maximum(v[:, None] - v[None, :], 0.0)


def xi_witness(xi, x1: int, x2: int) -> int:
    """Row with the smaller ``xi`` (lower index on ties).

    For an inf-convolution instance it is dominated by every mixture of rows
    ``x1`` and ``x2``.
    """
    v = _xi_vector(xi)
    return x1 if (v[x1], x1) <= (v[x2], x2) else x2


@dataclass(frozen=True, eq=False)
class InfConvInstance:
    g: BiMatrix
    xi: np.ndarray
    K: float
    f: BiMatrix
    argmin_z: np.ndarray

    def to_dict(self, guarantees=("t-convexlike", "infsup-convex", "simons-like")) -> dict:
        return {
            "kind": "infconv",
            "xi": self.xi.tolist(),
            "K": self.K,
            "g": np.asarray(self.g).tolist(),
            "f": np.asarray(self.f).tolist(),
            "guarantees": list(guarantees),
        }

    @classmethod
    def from_dict(cls, payload: dict) -> "InfConvInstance":
        for key in ("xi", "K", "g", "f"):
            if key not in payload:
                raise ValidationError(f"missing field {key!r}")
        g = validate_bimatrix(payload["g"])
        f = validate_bimatrix(payload["f"])
        xi = _xi_vector(payload["xi"])
        if f.shape != g.shape or xi.size != g.rows:
            raise LengthMismatch("infconv fields have inconsistent shapes")
        rebuilt = inf_convolution(g, xi, payload["K"])
        return cls(g, xi, _check_k(payload["K"]), f, rebuilt.argmin_z)


def inf_convolution(g, xi, K: float = 1.0) -> InfConvInstance:
    g = validate_bimatrix(g)
    xi = _xi_vector(xi)
    K = _check_k(K)
    if xi.size != g.rows:
        raise LengthMismatch(f"xi has {xi.size} entries but g has {g.rows} rows")
    data = np.asarray(g)
    penalty = K * phi_from_xi(xi)
    m, n = g.shape
    f = np.empty((m, n))
    arg = np.empty((m, n), dtype=int)
    step = max(1, _CHUNK // (m * n))
    for start in range(0, m, step):
        # cand[x, z, y] = g[z, y] + K * phi[x, z]
        cand = data[None, :, :] + penalty[start : start + step, :, None]
        idx = cand.argmin(axis=1)
        arg[start : start + step] = idx
        f[start : start + step] = np.take_along_axis(cand, idx[:, None, :], axis=1)[:, 0, :]
    arg.setflags(write=False)
    xi.setflags(write=False)
    return InfConvInstance(g, xi, K, BiMatrix(f), arg)


def lipschitz_transfer_check(inst: InfConvInstance, tol: Tolerance = DEFAULT_TOL) -> bool:
    """``f[x1, y] - f[x2, y] <= K * phi[x1, x2]`` for all triples."""
    f = np.asarray(inst.f)
    bound = inst.K * phi_from_xi(inst.xi)
    m, n = f.shape
    step = max(1, _CHUNK // (m * n))
    for start in range(0, m, step):
        diff = f[start : start + step, None, :] - f[None, :, :]
        if np.any(diff > bound[start : start + step, :, None] + tol.eps_feas):
            return False
    return True


def sup_convolution(h, eta, K: float = 1.0) -> BiMatrix:
    """``G[x, y] = max_w ( h[x, w] - K * phi_eta[y, w] )``.

    Computed as ``-(inf_convolution(-h^T, eta, K).f)^T``.
    """
    h = validate_bimatrix(h)
    eta = _xi_vector(eta, "eta")
    if eta.size != h.cols:
        raise LengthMismatch(f"eta has {eta.size} entries but h has {h.cols} columns")
    inner = inf_convolution(h.neg_transpose(), eta, K)
    return inner.f.neg_transpose()


def star_conjugate(h, xi) -> float:
    """``max_x (xi[x] - h[x])``."""
    h = np.asarray(h, dtype=float).ravel()
    xi = np.asarray(xi, dtype=float).ravel()
    if h.shape != xi.shape:
        raise LengthMismatch(f"h has {h.size} entries but xi has {xi.size}")
    if h.size == 0:
        raise ValidationError("vectors must be nonempty")
    return float((xi - h).max())


def delta_set_value(lambda_bounds) -> tuple[float, float]:
    """Both sides of the minimax equality for ``A = {phi : phi <= bounds}``.

    The pointwise sup over A is the bound vector itself, and the bound vector
    is the member of A with the largest infimum.
    """
    bounds = _xi_vector(lambda_bounds, "lambda_bounds")
    envelope = bounds  # sup_{phi in A} phi(x)
    lhs = float(envelope.min())
    rhs = float(bounds.min())  # inf_x of the best member of A
    return lhs, rhs


# --------------------------------------------------------------------------
# seeded generators


@dataclass(frozen=True, eq=False)
class GeneratedInstance:
    kind: str
    f: BiMatrix
    g: BiMatrix | None = None
    guarantees: tuple = ()
    fields: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        if self.kind == "random":
            return self.f.to_dict()
        if self.kind == "concavelike":
            return {
                "kind": "supconv",
                "eta": self.fields["eta"],
                "K": self.fields["K"],
                "h": self.fields["h"],
                "g": np.asarray(self.f).tolist(),
                "guarantees": list(self.guarantees),
            }
        if self.kind == "two_function":
            return {
                "kind": "pair",
                "xi": self.fields["xi"],
                "eta": self.fields["eta"],
                "K": self.fields["K"],
                "f": np.asarray(self.f).tolist(),
                "g": np.asarray(self.g).tolist(),
                "guarantees": list(self.guarantees),
            }
        out = {
            "kind": "infconv",
            "xi": self.fields["xi"],
            "K": self.fields["K"],
            "g": self.fields["g"],
            "f": np.asarray(self.f).tolist(),
            "guarantees": list(self.guarantees),
        }
        if "eta" in self.fields:
            out["eta"] = self.fields["eta"]
            out["h"] = self.fields["h"]
        return out


def make_rng(seed: int, index: int = 0) -> np.random.Generator:
    """Independent stream per ``(seed, index)``; any integer seed is accepted."""
    return np.random.default_rng(np.random.SeedSequence([int(seed) % 2**64, int(index)]))


def gen_instance(seed: int, shape: tuple[int, int], kind: str, *, index: int = 0, K: float = 1.0) -> GeneratedInstance:
    m, n = (int(v) for v in shape)
    if not (1 <= m <= MAX_DIM and 1 <= n <= MAX_DIM):
        raise ShapeCap(f"shape {shape} outside 1..{MAX_DIM}")
    if kind not in KINDS:
        raise ValidationError(f"unknown kind {kind!r}; expected one of {KINDS}")
    K = _check_k(K)
    rng = make_rng(seed, index)

    if kind == "random":
        return GeneratedInstance(kind, BiMatrix(rng.uniform(-1.0, 1.0, (m, n))))

    if kind == "convexlike":
        g = rng.uniform(-1.0, 1.0, (m, n))
        xi = rng.uniform(0.0, 1.0, m)
        inst = inf_convolution(g, xi, K)
        return GeneratedInstance(
            kind,
            inst.f,
            guarantees=("t-convexlike", "infsup-convex", "simons-like"),
            fields={"xi": xi.tolist(), "K": K, "g": g.tolist()},
        )

    if kind == "concavelike":
        h = rng.uniform(-1.0, 1.0, (m, n))
        eta = rng.uniform(0.0, 1.0, n)
        return GeneratedInstance(
            kind,
            sup_convolution(h, eta, K),
            guarantees=("s-concavelike", "supinf-concave"),
            fields={"eta": eta.tolist(), "K": K, "h": h.tolist()},
        )

    if kind == "km2_ready":
        h = rng.uniform(-1.0, 1.0, (m, n))
        eta = rng.uniform(0.0, 1.0, n)
        xi = rng.uniform(0.0, 1.0, m)
        g = sup_convolution(h, eta, K)
        inst = inf_convolution(g, xi, K)
        return GeneratedInstance(
            kind,
            inst.f,
            guarantees=("t-convexlike", "s-concavelike", "infsup-convex", "supinf-concave", "km2-ready"),
            fields={"xi": xi.tolist(), "K": K, "g": np.asarray(g).tolist(), "eta": eta.tolist(), "h": h.tolist()},
        )

    # two_function: F convexlike, G = sup-convolution of F plus nonnegative noise
    g = rng.uniform(-1.0, 1.0, (m, n))
    xi = rng.uniform(0.0, 1.0, m)
    noise = rng.uniform(0.0, 1.0, (m, n))
    eta = rng.uniform(0.0, 1.0, n)
    F = inf_convolution(g, xi, K).f
    G = sup_convolution(np.asarray(F) + noise, eta, K)
    return GeneratedInstance(
        kind,
        F,
        G,
        guarantees=("f:t-convexlike", "f:infsup-convex", "g:s-concavelike", "g:supinf-concave", "f<=g"),
        fields={"xi": xi.tolist(), "eta": eta.tolist(), "K": K},
    )
