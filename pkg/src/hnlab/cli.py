"""Command-line entry point: ``hnlab <subcommand> ...``.

Every subcommand prints a report, either as aligned text or (``--json``) as
key-sorted JSON with the fields ``command``, ``inputs_digest``, ``result``
and, for checks, ``passed``.  Exit codes: 0 pass, 1 check failure, 2 bad
input.  Flags override ``HNLAB_*`` environment variables, which override
the built-in defaults.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
from fractions import Fraction
from pathlib import Path
from typing import Any

from . import __version__
from . import hn as hnmod
from .exact import QQ, GF, BinaryForm, Field, HomPoly
from .local_model import (ChartError, MatrixOverKt, check_point_of_Y, chart_permutation, factor,
                          modification_degree_check, reconstruct)
from .multilinear import minor_trials, trace_trials
from .p1 import (FiberSubspace, GradedMap, SplitType, generic_rank, is_fiberwise_surjective,
                 jacobian_analysis, kernel_split_type, random_form, sample_experiment)
from .rng import SplitMix64
from .rz import RZDatum, rz_table
from .tor import tor_trials


class InputError(Exception):
    """Malformed user input; reported with exit code 2."""


ENV = {"field": "HNLAB_FIELD", "seed": "HNLAB_SEED", "trials": "HNLAB_TRIALS", "format": "HNLAB_FORMAT"}


def _env(name: str, default):
    return os.environ.get(ENV[name], default)


# ---------------------------------------------------------------- parsing helpers

def parse_field(text: str) -> Field:
    t = str(text).strip().lower()
    if t in ("q", "qq", "rationals", "rational"):
        return QQ
    try:
        p = int(t)
    except ValueError:
        raise InputError(f"field must be 'q' or an odd prime, got {text!r}") from None
    try:
        return GF(p)
    except ValueError as exc:
        raise InputError(str(exc)) from None


def parse_seed(text) -> int:
    try:
        s = int(text)
    except (TypeError, ValueError):
        raise InputError(f"seed must be an integer, got {text!r}") from None
    if not 0 <= s < 2 ** 64:
        raise InputError("seed must be an unsigned 64-bit integer")
    return s


def parse_count(text, what: str = "trials") -> int:
    try:
        n = int(text)
    except (TypeError, ValueError):
        raise InputError(f"{what} must be an integer, got {text!r}") from None
    if n < 0:
        raise InputError(f"{what} must be non-negative")
    return n


def load_json(text: str, what: str = "input") -> Any:
    """Inline JSON, '-' for stdin, or a path to a JSON file."""
    if text == "-":
        raw, where = sys.stdin.read(), "<stdin>"
    elif text.lstrip()[:1] in ("{", "[") or text.strip() in ("null", "true", "false"):
        raw, where = text, f"--{what}"
    else:
        try:
            raw, where = Path(text).read_text(), text
        except OSError as exc:
            raise InputError(f"cannot read {what} file {text!r}: {exc.strerror}") from None
    try:
        return json.loads(raw)
    except json.JSONDecodeError as exc:
        raise InputError(f"malformed JSON in {where} at line {exc.lineno} column {exc.colno}: {exc.msg}") from None


def parse_hn(text: str, cls=hnmod.HNType):
    """HN type as JSON ({"summands": ...}) or a comma list of slopes, one per summand."""
    t = text.strip()
    if t.startswith("{"):
        try:
            return cls.from_json(load_json(t, "type"))
        except ValueError as exc:
            raise InputError(str(exc)) from None
    if not t:
        return cls()
    try:
        return cls.from_slopes(Fraction(s.strip()) for s in t.split(","))
    except (ValueError, ZeroDivisionError):
        raise InputError(f"cannot read slopes from {text!r}") from None


def parse_ints(text: str, what: str) -> list[int]:
    t = text.strip().strip("[]")
    if not t:
        return []
    try:
        return [int(x) for x in t.split(",")]
    except ValueError:
        raise InputError(f"{what} must be a comma-separated list of integers, got {text!r}") from None


# ---------------------------------------------------------------- output

def _digest(inputs: dict) -> str:
    blob = json.dumps(inputs, sort_keys=True, separators=(",", ":"), default=str)
    return hashlib.sha256(blob.encode()).hexdigest()[:16]


def emit(report: dict, fmt: str, out=None) -> None:
    out = out or sys.stdout
    if fmt == "json":
        out.write(json.dumps(report, sort_keys=True, indent=2) + "\n")
        return
    out.write(f"{report['command']}  (inputs {report['inputs_digest']})\n")
    _write_table(report["result"], out, "  ")
    if "passed" in report:
        out.write(f"  => {'PASS' if report['passed'] else 'FAIL'}\n")


def _write_table(obj, out, indent: str) -> None:
    if isinstance(obj, dict):
        for k in sorted(obj):
            v = obj[k]
            if isinstance(v, (dict, list)) and v and any(isinstance(x, (dict, list)) for x in
                                                        (v.values() if isinstance(v, dict) else v)):
                out.write(f"{indent}{k}:\n")
                _write_table(v, out, indent + "  ")
            else:
                out.write(f"{indent}{k}: {json.dumps(v, sort_keys=True)}\n")
    elif isinstance(obj, list):
        for v in obj:
            out.write(f"{indent}- {json.dumps(v, sort_keys=True)}\n")
    else:
        out.write(f"{indent}{json.dumps(obj)}\n")


# ---------------------------------------------------------------- subcommands

def _hn_json(t) -> dict:
    return {**t.to_json(), "label": t.label(), "rank": t.rank, "degree": t.degree}


def cmd_hn(args) -> tuple[dict, dict, bool | None]:
    try:
        return _hn(args)
    except ValueError as exc:
        raise InputError(str(exc)) from None


def _hn(args):
    op = args.op
    if op in ("pdiv", "isocrystal"):
        a = parse_hn(args.a, hnmod.NewtonSlopes)
    else:
        a = parse_hn(args.a)
    inputs = {"op": op, "a": a.to_json()}
    if op in ("tensor", "sum"):
        if args.b is None:
            raise InputError(f"hn {op} needs a second type")
        b = parse_hn(args.b)
        inputs["b"] = b.to_json()
        res = _hn_json(hnmod.tensor(a, b) if op == "tensor" else hnmod.direct_sum(a, b))
    elif op == "dual":
        res = _hn_json(hnmod.dual(a))
    elif op == "h0":
        h = hnmod.h0_dim(a)
        res = {"h0": "infinite" if h == hnmod.INFINITE else h}
    elif op == "h1-vanishes":
        res = {"h1_vanishes": hnmod.h1_vanishes(a)}
    elif op == "positive":
        res = {"all_slopes_positive": hnmod.all_slopes_positive(a)}
    elif op == "info":
        res = _hn_json(a)
        if a.summands:
            res.update(mu_max=str(hnmod.mu_max(a)), mu_min=str(hnmod.mu_min(a)))
    elif op == "pdiv":
        res = _hn_json(hnmod.bundle_of_pdiv(a))
    else:
        res = _hn_json(hnmod.bundle_of_isocrystal(a))
    return inputs, res, None


def _graded_map(obj, F: Field) -> GradedMap:
    try:
        return GradedMap.from_json(obj, F)
    except ValueError as exc:
        raise InputError(str(exc)) from None


def cmd_p1(args) -> tuple[dict, dict, bool | None]:
    F = parse_field(args.field)
    if args.op == "kernel":
        if args.map is None:
            raise InputError("p1 kernel needs --map")
        phi = _graded_map(load_json(args.map, "map"), F)
        res = {"generic_rank": generic_rank(phi), "surjective": is_fiberwise_surjective(phi),
               "kernel": kernel_split_type(phi).to_json()}
        return {"op": "kernel", "field": F.name(), "map": phi.to_json()}, res, None
    if args.op == "modify":
        E = SplitType(parse_ints(args.twists, "--twists"))
        point = parse_ints(args.point, "--point")
        basis = load_json(args.basis, "basis") if args.basis else []
        try:
            K = FiberSubspace(tuple(point), tuple(tuple(v) for v in basis), E.rank, F)
        except (ValueError, TypeError) as exc:
            raise InputError(f"bad fiber subspace: {exc}") from None
        rep = modification_degree_check(E, K)
        inputs = {"op": "modify", "field": F.name(), "E": E.to_json(), "point": point,
                  "basis": [[F.to_json(c) for c in v] for v in K.basis]}
        return inputs, rep.to_json(), rep.balanced
    if args.op == "jacobian":
        P = _hompoly(args, F)
        if args.g is not None:
            try:
                g = [BinaryForm(c, F) for c in load_json(args.g, "g")]
            except (ValueError, TypeError) as exc:
                raise InputError(f"bad forms: {exc}") from None
        else:
            g = _first_surjective_sample(P, args, F)
        try:
            rep = jacobian_analysis(P, g, args.d)
        except ValueError as exc:
            raise InputError(str(exc)) from None
        inputs = {"op": "jacobian", "field": F.name(), "P": P.to_json(), "g": [x.to_json() for x in g],
                  "d": args.d}
        return inputs, rep.to_json(), None
    # sample
    trials = parse_count(args.trials if args.trials is not None else _env("trials", 500))
    seed = parse_seed(args.seed if args.seed is not None else _env("seed", 0))
    P = _hompoly(args, F)
    res = sample_experiment(P.nvars, args.d, P.degree, F, trials, seed, P=P, bound=args.bound,
                            redraw=args.redraw)
    inputs = {"op": "sample", "field": F.name(), "P": P.to_json(), "d": args.d, "trials": trials,
              "seed": seed, "bound": args.bound, "redraw": args.redraw}
    return inputs, res.to_json(), None


def _hompoly(args, F: Field) -> HomPoly:
    if args.P is None:
        if args.n < 1 or args.delta < 1:
            raise InputError("--n and --delta must be positive")
        return HomPoly.fermat(args.n, args.delta, F)
    obj = load_json(args.P, "P")
    try:
        P = HomPoly(int(obj["nvars"]), [(e, c) for e, c in obj["terms"]], F)
        if P.is_zero() or not P.is_homogeneous():
            raise ValueError("P must be nonzero and homogeneous")
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"bad polynomial: {exc}") from None
    return P


def _first_surjective_sample(P: HomPoly, args, F: Field) -> list[BinaryForm]:
    seed = parse_seed(args.seed if args.seed is not None else _env("seed", 0))
    rng = SplitMix64(seed)
    for _ in range(1000):
        g = [random_form(rng, args.d, F, args.bound) for _ in range(P.nvars)]
        if any(not x.is_zero() for x in g) and jacobian_analysis(P, g, args.d).surjective:
            return g
    raise InputError("no fiberwise-surjective sample found in 1000 draws")


def cmd_minor(args) -> tuple[dict, dict, bool | None]:
    F = parse_field(args.field)
    trials = parse_count(args.trials if args.trials is not None else _env("trials", 100))
    seed = parse_seed(args.seed if args.seed is not None else _env("seed", 0))
    if args.n is not None and args.r is not None and not 0 <= args.r <= args.n:
        raise InputError("need 0 <= r <= n")
    if args.n is not None and args.n < 1:
        raise InputError("n must be positive")
    inputs = {"field": F.name(), "trials": trials, "seed": seed, "n": args.n, "r": args.r,
              "trace": args.trace}
    if args.trace:
        summary = trace_trials(trials, seed, F, max_n=args.n or 5)
    else:
        summary = minor_trials(trials, seed, F, n=args.n, r=args.r)
    return inputs, summary.to_json(), summary.ok


def cmd_tor(args) -> tuple[dict, dict, bool | None]:
    F = parse_field(args.field)
    trials = parse_count(args.trials if args.trials is not None else _env("trials", 100))
    seed = parse_seed(args.seed if args.seed is not None else _env("seed", 0))
    summary = tor_trials(trials, seed, F, check_symmetry=not args.no_symmetry)
    inputs = {"field": F.name(), "trials": trials, "seed": seed, "symmetry": not args.no_symmetry}
    return inputs, summary.to_json(), summary.ok


def cmd_local(args) -> tuple[dict, dict, bool | None]:
    F = parse_field(args.field)
    obj = load_json(args.input, "input")
    try:
        M = MatrixOverKt.from_json(obj, F)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    inputs = {"op": args.op, "field": F.name(), "matrix": M.to_json()}
    if args.op == "check":
        rep = check_point_of_Y(M)
        return inputs, rep.to_json(), rep.member
    if args.perm is not None:
        perms = [parse_ints(args.perm, "--perm")]
    elif args.search_chart:
        p = chart_permutation(M)
        perms = [p] if p is not None else [tuple(range(M.n))]
    else:
        perms = None
    inputs["perms"] = [list(p) for p in perms] if perms else None
    try:
        fact = factor(M, perms)
    except ChartError as exc:
        return inputs, {"error": "chart", "message": str(exc)}, False
    except ValueError as exc:
        raise InputError(str(exc)) from None
    res = fact.to_json()
    res["roundtrip"] = reconstruct(fact) == M
    res["det_Q_unit"] = fact.det_Q().is_unit()
    return inputs, res, res["roundtrip"] and res["det_Q_unit"]


def cmd_rz(args) -> tuple[dict, dict, bool | None]:
    try:
        datum = RZDatum(args.height, args.dim)
        hi = Fraction(args.slope_max) if args.slope_max is not None else None
        lo = Fraction(args.slope_min)
        table = rz_table(datum, hi, lo)
    except (ValueError, ZeroDivisionError) as exc:
        raise InputError(str(exc)) from None
    inputs = {"height": args.height, "dim": args.dim, "slope_max": str(table.slope_max),
              "slope_min": str(table.slope_min)}
    res = table.to_json()
    fails = table.consistency_failures()
    if fails:
        res["failures"] = fails
    return inputs, res, not fails


# ---------------------------------------------------------------- parser

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    # SUPPRESS keeps a subcommand from resetting a flag given before it
    common.add_argument("--json", action="store_const", const="json", dest="format",
                        default=argparse.SUPPRESS, help="key-sorted JSON output")
    common.add_argument("--format", choices=("table", "json"), dest="format", default=argparse.SUPPRESS)

    p = argparse.ArgumentParser(prog="hnlab", description=__doc__.splitlines()[0], parents=[common])
    p.add_argument("--version", action="version", version=f"hnlab {__version__}")
    sub = p.add_subparsers(dest="command", required=True, metavar="command")

    h = sub.add_parser("hn", parents=[common], help="HN polygon operations")
    h.add_argument("op", choices=("info", "dual", "tensor", "sum", "h0", "h1-vanishes", "positive",
                                  "pdiv", "isocrystal"))
    h.add_argument("a", help="slopes '1/3,0' (one per stable summand) or JSON {\"summands\": ...}")
    h.add_argument("b", nargs="?", help="second type for tensor/sum")
    h.set_defaults(func=cmd_hn)

    q = sub.add_parser("p1", parents=[common], help="bundles on the projective line")
    q.add_argument("op", choices=("kernel", "modify", "jacobian", "sample"))
    q.add_argument("--field", default=None)
    q.add_argument("--map", help="graded map JSON {source, target, entries}")
    q.add_argument("--twists", default="0,0", help="splitting type to modify")
    q.add_argument("--point", default="1,0", help="point x0,y0 of P^1")
    q.add_argument("--basis", help="JSON list of fiber vectors spanning K")
    q.add_argument("--n", type=int, default=3, help="number of variables of the Fermat P")
    q.add_argument("--delta", type=int, default=4, help="degree of the Fermat P")
    q.add_argument("--P", help="JSON {nvars, terms: [[exponents], coeff]} replacing the Fermat P")
    q.add_argument("--d", type=int, default=1, help="degree of the forms g_i")
    q.add_argument("--g", help="JSON list of binary-form coefficient arrays")
    q.add_argument("--trials", default=None)
    q.add_argument("--seed", default=None)
    q.add_argument("--bound", type=int, default=3, help="coefficient bound over Q")
    q.add_argument("--redraw", action="store_true",
                   help="sample: replace non-surjective draws until --trials are accepted")
    q.set_defaults(func=cmd_p1)

    m = sub.add_parser("minor-check", parents=[common], help="minor-map kernel lemma (or --trace)")
    m.add_argument("--n", type=int)
    m.add_argument("--r", type=int)
    m.add_argument("--field", default=None)
    m.add_argument("--trials", default=None)
    m.add_argument("--seed", default=None)
    m.add_argument("--trace", action="store_true", help="check the trace-wedge identity instead")
    m.set_defaults(func=cmd_minor)

    t = sub.add_parser("tor-check", parents=[common], help="homology of the tensored resolutions")
    t.add_argument("--field", default=None)
    t.add_argument("--trials", default=None)
    t.add_argument("--seed", default=None)
    t.add_argument("--no-symmetry", action="store_true", help="skip the swapped-order rerun")
    t.set_defaults(func=cmd_tor)

    lm = sub.add_parser("local-model", parents=[common], help="matrix local model at t = 0")
    lm.add_argument("op", choices=("check", "factor"))
    lm.add_argument("--input", required=True, help="JSON {d, entries} inline, a path, or -")
    lm.add_argument("--field", default=None)
    lm.add_argument("--perm", help="column order to try, e.g. 1,0")
    lm.add_argument("--search-chart", action="store_true", help="pick a chart column order automatically")
    lm.set_defaults(func=cmd_local)

    r = sub.add_parser("rz", parents=[common], help="tangent HN profiles of basic RZ spaces")
    r.add_argument("op", choices=("enumerate",))
    r.add_argument("--height", type=int, required=True)
    r.add_argument("--dim", type=int, required=True)
    r.add_argument("--slope-max", help="NUM/DEN; defaults to 1/height when dim = 1")
    r.add_argument("--slope-min", default="0")
    r.set_defaults(func=cmd_rz)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    fmt = getattr(args, "format", None) or _env("format", "table")
    if fmt not in ("table", "json"):
        print(f"hnlab: {ENV['format']} must be 'table' or 'json'", file=sys.stderr)
        return 2
    if getattr(args, "field", "unset") is None:
        args.field = _env("field", "q")
    try:
        inputs, result, passed = args.func(args)
    except InputError as exc:
        print(f"hnlab {args.command}: {exc}", file=sys.stderr)
        return 2
    report = {"command": args.command, "inputs_digest": _digest(inputs), "result": result}
    if passed is not None:
        report["passed"] = bool(passed)
    emit(report, fmt)
    return 0 if passed is None or passed else 1


if __name__ == "__main__":
    sys.exit(main())
