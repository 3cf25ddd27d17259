"""Command-line front end: ``minimaxlab <subcommand> ...``.

Exit codes: 0 success, 1 a non-vacuous theorem check failed or a certificate
did not re-verify, 2 the input or flags were rejected.  ``--json`` output is
one line of canonical JSON (sorted keys), so identical invocations produce
identical bytes.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
import tempfile
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import __version__
from .alternative import AlternativeOutcome, FunctionFamily, decide_alternative, verify_certificate
from .construct import KINDS, InfConvInstance, gen_instance, inf_convolution, sup_convolution
from .core import MAX_DIM, BiMatrix, Tolerance, validate_bimatrix
from .exceptions import MinimaxLabError, ValidationError
from .genconvex import DEFAULT_SAMPLES, check_prop22, convexity_profile
from .lp import GameSolution, solve_zero_sum
from .mazur import MazurResult, SampledSequence, mazur_extract, mazur_schedule, pointwise_decay_report
from .minimax import check_app2, check_cor_equic, check_km1, check_km2, check_lem2, value_report, witness_row

THREADS_ENV = "MINIMAXLAB_THREADS"
SINGLE_THEOREMS = ("lem2", "km2", "corollary0")
PAIR_THEOREMS = ("km1", "app2", "cor_equic")


class UsageError(MinimaxLabError):
    """Bad flag or input; maps to exit code 2."""


# --------------------------------------------------------------------------
# serialization helpers


def canonical_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), allow_nan=False)


def digest(payload: dict) -> str:
    return hashlib.sha256(canonical_json(payload).encode()).hexdigest()


def write_atomic(path: str, text: str) -> None:
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".minimaxlab-", suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def read_json(path: str):
    try:
        if path == "-":
            text = sys.stdin.read()
        else:
            with open(path) as fh:
                text = fh.read()
    except OSError as exc:
        raise UsageError(f"input: cannot read {path!r}: {exc.strerror}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"input: invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}") from None


def _require(payload, *keys):
    if not isinstance(payload, dict):
        raise ValidationError("input: expected a JSON object")
    for key in keys:
        if key not in payload:
            raise ValidationError(f"missing field {key!r}")


def _matrix_field(payload: dict, key: str) -> BiMatrix:
    try:
        return validate_bimatrix(payload[key])
    except ValidationError as exc:
        exc.args = (f"field {key!r}: {exc}",)
        raise
    except (TypeError, ValueError) as exc:
        raise ValidationError(f"field {key!r}: {exc}") from None


# --------------------------------------------------------------------------
# instances


@dataclass(frozen=True, eq=False)
class Instance:
    kind: str
    payload: dict
    f: BiMatrix
    g: BiMatrix | None = None
    family: FunctionFamily | None = None


def load_instance(payload) -> Instance:
    """Dispatch on ``kind``: bimatrix, infconv, supconv, pair or family."""
    _require(payload, "kind")
    kind = payload["kind"]
    if kind == "bimatrix":
        return Instance(kind, payload, BiMatrix.from_dict(payload))
    if kind == "infconv":
        _require(payload, "f")
        return Instance(kind, payload, _matrix_field(payload, "f"))
    if kind == "supconv":
        _require(payload, "g")
        return Instance(kind, payload, _matrix_field(payload, "g"))
    if kind == "pair":
        _require(payload, "f", "g")
        return Instance(kind, payload, _matrix_field(payload, "f"), _matrix_field(payload, "g"))
    if kind == "family":
        fam = FunctionFamily.from_dict(payload)
        return Instance(kind, payload, BiMatrix(fam.members), family=fam)
    raise ValidationError(f"field 'kind': unknown instance kind {kind!r}")


# --------------------------------------------------------------------------
# analysis


@dataclass(frozen=True)
class AnalysisReport:
    digest: dict
    values: dict
    convexity: list
    prop22: list
    theorems: list
    tolerance: dict
    version: str
    game: dict
    alternative: dict | None = None
    certificates_ok: bool = True
    extra: dict = field(default_factory=dict)

    @property
    def violated(self) -> bool:
        bad_theorem = any(not t["vacuous"] and not t["conclusion_holds"] for t in self.theorems)
        bad_prop = any(not p["vacuous"] and not p["passed"] for p in self.prop22)
        return bad_theorem or bad_prop or not self.certificates_ok

    def to_dict(self) -> dict:
        out = {
            "kind": "analysis_report",
            "digest": self.digest,
            "values": self.values,
            "game": self.game,
            "convexity": self.convexity,
            "prop22": self.prop22,
            "theorems": self.theorems,
            "tolerance": self.tolerance,
            "version": self.version,
            "certificates_ok": self.certificates_ok,
        }
        if self.alternative is not None:
            out["alternative"] = self.alternative
        if self.extra:
            out["extra"] = self.extra
        return out

    @classmethod
    def from_dict(cls, payload: dict) -> "AnalysisReport":
        _require(payload, "digest", "values", "game", "convexity", "prop22", "theorems", "tolerance", "version")
        return cls(
            payload["digest"],
            payload["values"],
            payload["convexity"],
            payload["prop22"],
            payload["theorems"],
            payload["tolerance"],
            payload["version"],
            payload["game"],
            payload.get("alternative"),
            payload.get("certificates_ok", True),
            payload.get("extra", {}),
        )

    def reverify(self, instance: Instance) -> bool:
        """Check every embedded certificate against ``instance`` from scratch."""
        tol = Tolerance(**self.tolerance)
        if self.digest.get("sha256") != digest(instance.payload):
            return False
        ok = GameSolution.from_dict(self.game).verify(instance.f, tol)
        if self.alternative is not None:
            if instance.family is None:
                return False
            outcome = AlternativeOutcome.from_dict(self.alternative)
            ok = ok and verify_certificate(outcome, instance.family, tol)
        return bool(ok)


def analyze(instance: Instance, ts, ss, tol: Tolerance, theorems=None) -> AnalysisReport:
    F = instance.f
    report = value_report(F, tol)
    game = report.solution
    certificates_ok = game.verify(F, tol)
    convexity = [r.to_dict() for r in convexity_profile(F, ts, ss, tol, mixed=report.mixed)]
    prop22 = [check_prop22(F, t, tol).to_dict() for t in ts]

    wanted = theorems
    if instance.g is None:
        available = SINGLE_THEOREMS
    else:
        available = SINGLE_THEOREMS + PAIR_THEOREMS
    if wanted is None:
        wanted = available
    unknown = [w for w in wanted if w not in available]
    if unknown:
        raise UsageError(f"--theorems: {unknown[0]!r} not available for kind {instance.kind!r}")

    checks = []
    if "lem2" in wanted:
        checks.append(check_lem2(F, tol, report=report))
    for t in ts:
        if "km2" in wanted:
            checks.append(check_km2(F, t, tol))
        if "corollary0" in wanted:
            checks.append(witness_row(F, t, tol)[1])
        if "km1" in wanted:
            checks.append(check_km1(F, instance.g, t, tol))
        if "app2" in wanted:
            checks.append(check_app2(F, instance.g, t, tol))
    if "cor_equic" in wanted:
        checks.append(check_cor_equic(F, instance.g, tol))

    alternative = None
    if instance.family is not None:
        outcome = decide_alternative(instance.family, tol)
        certificates_ok = certificates_ok and verify_certificate(outcome, instance.family, tol)
        alternative = outcome.to_dict()

    return AnalysisReport(
        digest={"kind": instance.kind, "shape": list(F.shape), "sha256": digest(instance.payload)},
        values=report.to_dict(),
        convexity=convexity,
        prop22=prop22,
        theorems=[c.to_dict() for c in checks],
        tolerance=tol.to_dict(),
        version=__version__,
        game=game.to_dict(),
        alternative=alternative,
        certificates_ok=bool(certificates_ok),
    )


# --------------------------------------------------------------------------
# flag parsing


def _float_list(text: str, flag: str) -> tuple:
    try:
        values = tuple(float(v) for v in text.split(",") if v.strip())
    except ValueError:
        raise UsageError(f"{flag}: expected a comma-separated list of numbers, got {text!r}") from None
    if not values:
        raise UsageError(f"{flag}: empty list")
    return values


def _unit_list(text: str, flag: str) -> tuple:
    values = _float_list(text, flag)
    for v in values:
        if not 0.0 < v < 1.0:
            raise UsageError(f"{flag}: {v!r} is not strictly between 0 and 1")
    return values


def _tolerance(args) -> Tolerance:
    try:
        return Tolerance(args.tol_feas, args.tol_opt, args.tol_cert)
    except ValidationError as exc:
        raise UsageError(f"--tol: {exc}") from None


def _shape(text: str) -> tuple[int, int]:
    try:
        m, n = (int(v) for v in text.lower().split("x"))
    except ValueError:
        raise UsageError(f"--shape: expected MxN, got {text!r}") from None
    if not (1 <= m <= MAX_DIM and 1 <= n <= MAX_DIM):
        raise UsageError(f"--shape: dimensions must lie in 1..{MAX_DIM}, got {text!r}")
    return m, n


def _seed(text: str) -> int:
    try:
        value = int(text, 0)
    except ValueError:
        raise UsageError(f"--seed: not an integer: {text!r}") from None
    if not 0 <= value < 2**64:
        raise UsageError(f"--seed: must fit in 64 unsigned bits, got {value}")
    return value


def _threads() -> int:
    raw = os.environ.get(THREADS_ENV, "1")
    try:
        value = int(raw)
    except ValueError:
        raise UsageError(f"{THREADS_ENV}: not an integer: {raw!r}") from None
    return max(1, value)


def fan_out(func, items):
    """Map ``func`` over ``items`` on the worker pool, keeping input order."""
    items = list(items)
    workers = min(_threads(), max(1, len(items)))
    if workers == 1:
        return [func(x) for x in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(func, items))


# --------------------------------------------------------------------------
# human-readable output


def _fmt(v) -> str:
    if isinstance(v, bool):
        return "yes" if v else "no"
    if isinstance(v, float):
        return f"{v:.10g}"
    return str(v)


def _table(rows, widths) -> str:
    return "\n".join("".join(_fmt(c).ljust(w) for c, w in zip(row, widths)).rstrip() for row in rows)


def human_analysis(rep: dict) -> str:
    d = rep["digest"]
    lines = [f"instance  {d['kind']} {d['shape'][0]}x{d['shape'][1]}  sha256 {d['sha256'][:16]}"]
    v = rep["values"]
    lines.append(_table([(k, v[k]) for k in ("lower", "mixed", "upper", "gap")], (10, 20)))
    lines.append("")
    rows = [("property", "param", "holds", "compared")]
    for c in rep["convexity"]:
        compared = "" if c["lhs_value"] is None else f"{_fmt(c['lhs_value'])} vs {_fmt(c['rhs_value'])}"
        rows.append((c["property"], "" if c["t"] is None else c["t"], c["holds"], compared))
    lines.append(_table(rows, (16, 8, 7, 30)))
    lines.append("")
    rows = [("theorem", "param", "vacuous", "holds")]
    rows += [
        (t["theorem"], t["numbers"].get("t", ""), t["vacuous"], t["conclusion_holds"]) for t in rep["theorems"]
    ]
    lines.append(_table(rows, (12, 8, 9, 7)))
    if "alternative" in rep:
        a = rep["alternative"]
        lines.append("")
        lines.append(f"alternative {a['tag']}  margin {_fmt(a['margin'])}")
    lines.append("")
    lines.append(f"certificates {'ok' if rep['certificates_ok'] else 'FAILED'}")
    return "\n".join(lines)


def human_generic(obj) -> str:
    if isinstance(obj, list):
        return "\n\n".join(human_generic(o) for o in obj)
    rows = []
    for key in sorted(obj):
        value = obj[key]
        if isinstance(value, (dict, list)):
            value = canonical_json(value)
            if len(value) > 60:
                value = value[:57] + "..."
        rows.append((key, value))
    return _table(rows, (18, 60))


# --------------------------------------------------------------------------
# subcommands (each returns (payload, exit_code))


def cmd_analyze(args):
    tol = _tolerance(args)
    ts = _unit_list(args.t, "--t")
    ss = _unit_list(args.s, "--s")
    theorems = None if args.theorems is None else tuple(x.strip() for x in args.theorems.split(",") if x.strip())
    raw = read_json(args.input)
    batch = isinstance(raw, list)
    instances = [load_instance(p) for p in (raw if batch else [raw])]
    reports = fan_out(lambda inst: analyze(inst, ts, ss, tol, theorems), instances)
    code = 1 if any(r.violated for r in reports) else 0
    dicts = [r.to_dict() for r in reports]
    return (dicts if batch else dicts[0]), code


def cmd_alternative(args):
    tol = _tolerance(args)
    fam = FunctionFamily.from_dict(_checked_kind(read_json(args.input), "family"))
    outcome = decide_alternative(fam, tol)
    ok = verify_certificate(outcome, fam, tol)
    out = outcome.to_dict()
    out.update(verified=bool(ok), gray_zone=outcome.in_gray_zone(tol), tolerance=tol.to_dict())
    return out, 0 if ok else 1


def _checked_kind(payload, kind):
    _require(payload, "kind")
    if payload["kind"] != kind:
        raise ValidationError(f"field 'kind': expected {kind!r}, got {payload['kind']!r}")
    return payload


def _vector_arg(text, flag, length):
    if text is None:
        return np.linspace(0.0, 1.0, length)
    values = np.asarray(_float_list(text, flag))
    if values.size != length:
        raise UsageError(f"{flag}: expected {length} values, got {values.size}")
    return values


def cmd_construct(args):
    payload = read_json(args.input)
    base = BiMatrix.from_dict(_checked_kind(payload, "bimatrix"))
    if args.K < 0 or not np.isfinite(args.K):
        raise UsageError(f"--K: must be finite and nonnegative, got {args.K!r}")
    if args.which == "infconv":
        xi = _vector_arg(args.xi, "--xi", base.rows)
        inst = inf_convolution(base, xi, args.K)
        return inst.to_dict(), 0
    eta = _vector_arg(args.eta, "--eta", base.cols)
    G = sup_convolution(base, eta, args.K)
    return {
        "kind": "supconv",
        "eta": eta.tolist(),
        "K": float(args.K),
        "h": np.asarray(base).tolist(),
        "g": np.asarray(G).tolist(),
        "guarantees": ["s-concavelike", "supinf-concave"],
    }, 0


def cmd_gen(args):
    seed = _seed(args.seed)
    shape = _shape(args.shape)
    if args.count < 1:
        raise UsageError(f"--count: must be positive, got {args.count}")
    if args.K < 0 or not np.isfinite(args.K):
        raise UsageError(f"--K: must be finite and nonnegative, got {args.K!r}")
    items = fan_out(
        lambda i: gen_instance(seed, shape, args.kind, index=i, K=args.K).to_dict(),
        range(args.index, args.index + args.count),
    )
    return (items[0] if args.count == 1 else items), 0


def _load_sequence(path):
    if path.lower().endswith(".csv"):
        try:
            return SampledSequence.from_csv(path)
        except OSError as exc:
            raise UsageError(f"input: cannot read {path!r}: {exc.strerror}") from None
    return SampledSequence.from_dict(read_json(path))


def cmd_mazur(args):
    tol = _tolerance(args)
    seq = _load_sequence(args.input)
    out = {"tolerance": tol.to_dict()}
    ok = True
    if args.targets is not None:
        targets = _float_list(args.targets, "--targets")
        steps = mazur_schedule(seq, targets, tol, policy=args.policy)
        out["kind"] = "mazur_schedule"
        out["steps"] = [s.to_dict() for s in steps]
        ok = all(s.result.verify(seq, tol) for s in steps)
    else:
        w = seq.N if args.window is None else args.window
        result = mazur_extract(seq, args.tail, w, tol)
        out.update(result.to_dict())
        ok = result.verify(seq, tol)
    if args.decay:
        tails, table = pointwise_decay_report(seq)
        out["decay"] = {"tails": tails.tolist(), "table": table.tolist()}
    out["verified"] = bool(ok)
    return out, 0 if ok else 1


def cmd_game(args):
    tol = _tolerance(args)
    inst = load_instance(read_json(args.input))
    sol = solve_zero_sum(inst.f, tol)
    ok = sol.verify(inst.f, tol)
    out = sol.to_dict()
    out.update(verified=bool(ok), tolerance=tol.to_dict())
    return out, 0 if ok else 1


def _verify_manifest(payload, tol) -> tuple[bool, str]:
    kind = payload["kind"]
    if kind == "infconv":
        inst = InfConvInstance.from_dict(payload)
        rebuilt = inf_convolution(inst.g, inst.xi, inst.K).f
        same = bool(np.allclose(np.asarray(rebuilt), np.asarray(inst.f), rtol=0, atol=tol.eps_cert))
        return same, "f recomputed from g, xi, K"
    if kind == "supconv":
        _require(payload, "h", "eta", "K", "g")
        G = sup_convolution(_matrix_field(payload, "h"), payload["eta"], payload["K"])
        same = bool(np.allclose(np.asarray(G), np.asarray(_matrix_field(payload, "g")), rtol=0, atol=tol.eps_cert))
        return same, "g recomputed from h, eta, K"
    if kind == "pair":
        f, g = _matrix_field(payload, "f"), _matrix_field(payload, "g")
        if f.shape != g.shape:
            return False, "f and g shapes differ"
        return bool(np.all(np.asarray(f) <= np.asarray(g) + tol.eps_feas)), "f <= g entrywise"
    raise ValidationError(f"field 'kind': {kind!r} needs --instance")


def cmd_verify(args):
    tol = _tolerance(args)
    payload = read_json(args.input)
    _require(payload, "kind")
    kind = payload["kind"]
    if args.instance is None:
        ok, what = _verify_manifest(payload, tol)
    elif kind == "game_solution":
        inst = load_instance(read_json(args.instance))
        ok, what = GameSolution.from_dict(payload).verify(inst.f, tol), "game solution"
    elif kind == "alternative_outcome":
        fam = FunctionFamily.from_dict(_checked_kind(read_json(args.instance), "family"))
        ok, what = verify_certificate(AlternativeOutcome.from_dict(payload), fam, tol), "alternative certificate"
    elif kind == "mazur_result":
        ok, what = MazurResult.from_dict(payload).verify(_load_sequence(args.instance), tol), "mazur result"
    elif kind == "analysis_report":
        rep = AnalysisReport.from_dict(payload)
        tol = Tolerance(**rep.tolerance)
        ok, what = rep.reverify(load_instance(read_json(args.instance))), "analysis report certificates"
    else:
        raise ValidationError(f"field 'kind': cannot verify {kind!r}")
    return {"kind": kind, "checked": what, "verified": bool(ok), "tolerance": tol.to_dict()}, 0 if ok else 1


# --------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol-feas", type=float, default=1e-9, help="feasibility slack")
    common.add_argument("--tol-opt", type=float, default=1e-7, help="duality-gap tolerance")
    common.add_argument("--tol-cert", type=float, default=1e-7, help="certificate re-verification slack")
    common.add_argument("--json", action="store_true", help="single-line JSON output")
    common.add_argument("-o", "--output", help="write output to this file (atomically)")

    samples = ",".join(str(t) for t in DEFAULT_SAMPLES)
    parser = argparse.ArgumentParser(prog="minimaxlab", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"minimaxlab {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", parents=[common], help="values, convexity and theorem checks")
    p.add_argument("input", help="instance JSON (or a list of instances); '-' for stdin")
    p.add_argument("--t", default=samples, help="comma list of t values")
    p.add_argument("--s", default=samples, help="comma list of s values")
    p.add_argument("--theorems", help="comma list restricting the theorem checks")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("alternative", parents=[common], help="decide A1/A2 for a function family")
    p.add_argument("input")
    p.set_defaults(func=cmd_alternative)

    p = sub.add_parser("construct", parents=[common], help="inf- or sup-convolution of a matrix")
    p.add_argument("which", choices=("infconv", "supconv"))
    p.add_argument("input", help="bimatrix JSON")
    p.add_argument("--xi", help="comma list over rows (default evenly spaced in [0, 1])")
    p.add_argument("--eta", help="comma list over columns (default evenly spaced in [0, 1])")
    p.add_argument("--K", type=float, default=1.0)
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("gen", parents=[common], help="seeded instance generation")
    p.add_argument("--seed", required=True)
    p.add_argument("--kind", choices=KINDS, default="random")
    p.add_argument("--shape", default="4x4", help="MxN")
    p.add_argument("--count", type=int, default=1)
    p.add_argument("--index", type=int, default=0, help="stream index of the first instance")
    p.add_argument("--K", type=float, default=1.0)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("mazur", parents=[common], help="small-norm convex combinations of a sequence")
    p.add_argument("--input", required=True, help="sequence JSON or CSV")
    p.add_argument("--tail", type=int, default=1, help="1-based tail start")
    p.add_argument("--window", type=int, help="1-based window end (default N)")
    p.add_argument("--targets", help="comma list of decreasing norm targets")
    p.add_argument("--policy", choices=("tail", "grow"), default="tail")
    p.add_argument("--decay", action="store_true", help="include the pointwise decay table")
    p.set_defaults(func=cmd_mazur)

    p = sub.add_parser("game", parents=[common], help="solve a zero-sum game")
    p.add_argument("--input", required=True)
    p.set_defaults(func=cmd_game)

    p = sub.add_parser("verify", parents=[common], help="re-verify a certificate or manifest")
    p.add_argument("input")
    p.add_argument("--instance", help="instance the certificate refers to")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        payload, code = args.func(args)
    except (ValidationError, UsageError) as exc:
        print(f"minimaxlab {args.command}: {exc}", file=sys.stderr)
        return 2
    except MinimaxLabError as exc:
        print(f"minimaxlab {args.command}: solver error: {exc}", file=sys.stderr)
        return 1
    if args.json or args.output:
        text = canonical_json(payload) + "\n"
    elif args.command == "analyze":
        items = payload if isinstance(payload, list) else [payload]
        text = "\n\n".join(human_analysis(r) for r in items) + "\n"
    else:
        text = human_generic(payload) + "\n"
    if args.output:
        write_atomic(args.output, text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
