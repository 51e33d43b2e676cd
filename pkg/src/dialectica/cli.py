"""Command-line front end.

    dialectica --cmd typecheck --in term.lam
    dialectica --cmd translate --in term.lam --format json
    dialectica --cmd normalize --in target.lam
    dialectica --cmd grad --in f.lam --point 2,5
    dialectica --cmd laws --seed 0
    dialectica --cmd soundness-suite --seed 0

Source inputs may carry a context, ``x : real, f : real -> real |- f x``.
With ``--format json`` every record is one JSON object per line with sorted
keys; timings are left out so a fixed seed gives byte-identical output.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Any, Dict, List, Optional, Sequence, Tuple

from .equations import NormalizationError, normalize
from .numeric import (
    EvalError,
    gradient_fd,
    gradient_forward,
    max_relative_error,
    real_arity,
    value_and_gradient_dialectica,
)
from .parsing import ParseError, parse_source, parse_target, parse_type
from .primitives import UnknownPrimitive
from .printing import pretty, pretty_type
from .suites import LAW_SUITES, TOL_AD, TOL_FD, run_soundness
from .transform import counter, counter_type, witness, witness_type
from .typecheck import EMPTY, Context, TypeCheckError, infer_source, infer_target

EXIT_OK = 0
EXIT_FAILED = 1  # a tolerance or law check failed
EXIT_USAGE = 2
EXIT_IO = 3
EXIT_PARSE = 4
EXIT_TYPE = 5
EXIT_EVAL = 6

COMMANDS = ("typecheck", "translate", "normalize", "grad", "laws", "soundness-suite")
NEEDS_INPUT = {"typecheck", "translate", "normalize", "grad"}


class CliError(Exception):
    def __init__(self, code: int, kind: str, message: str, **extra):
        super().__init__(message)
        self.code = code
        self.kind = kind
        self.extra = extra


def _positive(text: str) -> float:
    value = float(text)
    if not value > 0:
        raise argparse.ArgumentTypeError(f"tolerance must be positive, got {text}")
    return value


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="dialectica", description="Dialectica transformation as reverse-mode AD.")
    p.add_argument("--cmd", required=True, choices=COMMANDS)
    p.add_argument("--in", dest="input", help="input file ('-' for stdin)")
    p.add_argument("--point", help="comma-separated evaluation point for grad")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--tol-ad", type=_positive, default=TOL_AD, help="reverse vs forward relative tolerance")
    p.add_argument("--tol-fd", type=_positive, default=TOL_FD, help="reverse vs finite differences tolerance")
    p.add_argument("--format", choices=("text", "json"), default="text")
    return p


# ---------------------------------------------------------------------------
# Input


def read_input(path: str) -> str:
    try:
        if path == "-":
            return sys.stdin.read()
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise CliError(EXIT_IO, "io", f"cannot read {path}: {exc.strerror or exc}") from None


def _split_context(text: str) -> Tuple[Context, str]:
    if "|-" not in text and "⊢" not in text:
        return EMPTY, text
    head, _, body = text.replace("⊢", "|-").partition("|-")
    entries = []
    for item in filter(None, (s.strip() for s in _split_top(head))):
        name, sep, ty = item.partition(":")
        if not sep or not name.strip().isidentifier():
            raise ParseError(f"bad context entry {item!r}", 1, 1)
        entries.append((name.strip(), parse_type(ty, target=False)))
    return Context(entries), body


def _split_top(text: str) -> List[str]:
    """Split on commas outside parentheses."""
    parts, depth, cur = [], 0, []
    for ch in text:
        if ch == "," and depth == 0:
            parts.append("".join(cur))
            cur = []
            continue
        depth += ch == "("
        depth -= ch == ")"
        cur.append(ch)
    parts.append("".join(cur))
    return parts


def parse_point(text: Optional[str]) -> List[float]:
    if text is None:
        raise CliError(EXIT_USAGE, "usage", "grad needs --point")
    try:
        return [float(s) for s in text.replace(" ", "").split(",") if s]
    except ValueError:
        raise CliError(EXIT_USAGE, "usage", f"bad point {text!r}") from None


# ---------------------------------------------------------------------------
# Commands (each returns (exit code, records))

Records = List[Dict[str, Any]]


def cmd_typecheck(text: str) -> Tuple[int, Records]:
    ctx, body = _split_context(text)
    t = parse_source(body)
    ty = infer_source(ctx, t)
    return EXIT_OK, [{"record": "typecheck", "term": pretty(t), "type": pretty_type(ty)}]


def cmd_translate(text: str) -> Tuple[int, Records]:
    ctx, body = _split_context(text)
    t = parse_source(body)
    ty = infer_source(ctx, t)
    records = [
        {
            "record": "witness",
            "term": pretty(t),
            "type": pretty_type(ty),
            "witness": pretty(normalize(witness(t))),
            "witness_type": pretty_type(witness_type(ty)),
            "counter_type": pretty_type(counter_type(ty)),
        }
    ]
    for x, a in ctx.items():
        records.append(
            {
                "record": "counter",
                "var": x,
                "counter": pretty(normalize(counter(t, x))),
                "type": pretty_type(counter_type(ty)) + " -> M[" + pretty_type(counter_type(a)) + "]",
            }
        )
    return EXIT_OK, records


def cmd_normalize(text: str) -> Tuple[int, Records]:
    t = parse_target(text)
    nf = normalize(t)
    record: Dict[str, Any] = {"record": "normal_form", "term": pretty(t), "normal_form": pretty(nf)}
    try:
        record["type"] = pretty_type(infer_target(EMPTY, t)) if not t.free_vars else None
    except TypeCheckError as exc:
        record["type"] = None
        record["type_note"] = str(exc)
    return EXIT_OK, [record]


def cmd_grad(text: str, point: List[float], tol_ad: float, tol_fd: float) -> Tuple[int, Records]:
    ctx, body = _split_context(text)
    if len(ctx):
        raise CliError(EXIT_USAGE, "usage", "grad expects a closed term")
    f = parse_source(body)
    ty = infer_source(EMPTY, f)
    n = real_arity(ty)
    if len(point) != n:
        raise CliError(EXIT_USAGE, "usage", f"{n}-ary function, point has {len(point)} coordinates")
    value, grad = value_and_gradient_dialectica(f, point)
    fwd = gradient_forward(f, point)
    fd = gradient_fd(f, point)
    err_ad = max_relative_error(grad, fwd)
    err_fd = max_relative_error(grad, fd)
    well_conditioned = all(abs(g) >= 1e-3 for g in fwd)
    ok = err_ad <= tol_ad and (err_fd <= tol_fd or not well_conditioned)
    record = {
        "record": "grad",
        "term": pretty(f),
        "type": pretty_type(ty),
        "point": point,
        "value": value,
        "gradient": list(grad),
        "forward": list(fwd),
        "finite_differences": list(fd),
        "max_rel_err_forward": err_ad,
        "max_rel_err_fd": err_fd,
        "fd_checked": well_conditioned,
        "ok": ok,
    }
    return (EXIT_OK if ok else EXIT_FAILED), [record]


def _suite_record(r) -> Dict[str, Any]:
    rec = r.as_record()
    rec.pop("seconds")
    rec["record"] = "suite"
    return rec


def cmd_laws(seed: int) -> Tuple[int, Records]:
    results = [run(seed=seed) for run in LAW_SUITES.values()]
    code = EXIT_OK if all(r.passed for r in results) else EXIT_FAILED
    return code, [_suite_record(r) for r in sorted(results, key=lambda r: r.name)]


def cmd_soundness(seed: int) -> Tuple[int, Records]:
    r = run_soundness(seed=seed)
    return (EXIT_OK if r.passed else EXIT_FAILED), [_suite_record(r)]


# ---------------------------------------------------------------------------
# Output


def _text(record: Dict[str, Any]) -> str:
    kind = record.get("record")
    if kind == "typecheck":
        return f"{record['term']} : {record['type']}"
    if kind == "witness":
        return "\n".join(
            [
                f"term     {record['term']} : {record['type']}",
                f"W        {record['witness_type']}",
                f"C        {record['counter_type']}",
                f"witness  {record['witness']}",
            ]
        )
    if kind == "counter":
        return f"counter {record['var']}  {record['counter']} : {record['type']}"
    if kind == "normal_form":
        ty = f" : {record['type']}" if record.get("type") else ""
        return f"{record['normal_form']}{ty}"
    if kind == "grad":
        fmt = lambda xs: "(" + ", ".join(repr(x) for x in xs) + ")"  # noqa: E731
        return "\n".join(
            [
                f"value       {record['value']!r}",
                f"gradient    {fmt(record['gradient'])}",
                f"forward     {fmt(record['forward'])}   max rel err {record['max_rel_err_forward']:.3g}",
                f"finite diff {fmt(record['finite_differences'])}   max rel err {record['max_rel_err_fd']:.3g}",
                "ok" if record["ok"] else "TOLERANCE EXCEEDED",
            ]
        )
    if kind == "suite":
        line = f"{'PASS' if record['passed'] else 'FAIL'}  {record['name']:<22} {record['cases']:>4} cases"
        if record.get("detail"):
            line += f"  {record['detail']}"
        if record.get("counterexample"):
            line += "\n      counterexample: " + json.dumps(record["counterexample"], sort_keys=True)
        return line
    if kind == "error":
        return f"error ({record['kind']}): {record['message']}"
    return json.dumps(record, sort_keys=True)


def emit(records: Records, fmt: str, out) -> None:
    for rec in records:
        if fmt == "json":
            out.write(json.dumps(rec, sort_keys=True, ensure_ascii=False) + "\n")
        else:
            out.write(_text(rec) + "\n")


def run(argv: Optional[Sequence[str]] = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        if args.cmd in NEEDS_INPUT and not args.input:
            raise CliError(EXIT_USAGE, "usage", f"--cmd {args.cmd} needs --in")
        text = read_input(args.input) if args.cmd in NEEDS_INPUT else ""
        try:
            if args.cmd == "typecheck":
                code, records = cmd_typecheck(text)
            elif args.cmd == "translate":
                code, records = cmd_translate(text)
            elif args.cmd == "normalize":
                code, records = cmd_normalize(text)
            elif args.cmd == "grad":
                code, records = cmd_grad(text, parse_point(args.point), args.tol_ad, args.tol_fd)
            elif args.cmd == "laws":
                code, records = cmd_laws(args.seed)
            else:
                code, records = cmd_soundness(args.seed)
        except ParseError as exc:
            raise CliError(EXIT_PARSE, "parse", str(exc), line=exc.line, col=exc.col) from None
        except UnknownPrimitive as exc:
            raise CliError(EXIT_PARSE, "parse", f"unknown primitive {exc.args[0]}") from None
        except TypeCheckError as exc:
            raise CliError(EXIT_TYPE, "type", str(exc)) from None
        except (TypeError, ValueError) as exc:
            raise CliError(EXIT_TYPE, "type", str(exc)) from None
        except (EvalError, NormalizationError) as exc:
            raise CliError(EXIT_EVAL, "eval", str(exc)) from None
    except CliError as exc:
        record = {"record": "error", "kind": exc.kind, "message": str(exc), "exit_code": exc.code, **exc.extra}
        emit([record], args.format, err if args.format == "text" else out)
        return exc.code
    emit(records, args.format, out)
    return code


def main(argv: Optional[Sequence[str]] = None) -> None:
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
