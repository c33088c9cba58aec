"""Command-line entry point: ``lindep {check,constraints,run,probe,steps} FILE``.

Exit status: 0 on success, 1 on a rejection or failed probe, 2 on usage,
parse or I/O errors.
"""

from __future__ import annotations

import argparse
import contextlib
import json
import sys
from importlib import resources
from typing import Dict, List, Optional, Sequence, TextIO, Tuple

from .index import INF, eval_closed, free_index_vars
from .semantics import (
    DEFAULT_FUEL, EvalError, format_value, krivine_run, probe_sensitivity,
)
from .semantics.interp import Interpreter
from .syntax import Def, ParseError, Program, Real, parse_program
from .syntax.ast import Arrow, Term, Type
from .typecheck import Checker, CheckResult
from .typecheck.types import as_bang


class UsageError(Exception):
    pass


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return value


def _nonnegative_float(text: str) -> float:
    value = float(text)
    if not value >= 0:
        raise argparse.ArgumentTypeError("must be >= 0")
    return value


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("file", help="source file (.fz)")
    common.add_argument("--json", action="store_true", help="line-delimited JSON output")
    common.add_argument("--paper-iter", action="store_true",
                        help="type iter with grade r * i instead of r ^ i")
    common.add_argument("--no-prelude", action="store_true", help="do not load prelude.fz")
    common.add_argument("--fuel", type=_positive_int, default=DEFAULT_FUEL)
    common.add_argument("--entry", help="definition to run, probe or measure")
    common.add_argument("--samples", type=_positive_int, default=10_000)
    common.add_argument("--tolerance", type=_nonnegative_float, default=1e-9)
    common.add_argument("--seed", type=int, default=42)

    parser = argparse.ArgumentParser(prog="lindep", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("check", parents=[common], help="check every declaration")
    sub.add_parser("constraints", parents=[common], help="print generated constraints")
    sub.add_parser("run", parents=[common], help="evaluate --entry")
    sub.add_parser("probe", parents=[common], help="probe the sensitivity of --entry")
    sub.add_parser("steps", parents=[common], help="Krivine machine steps of --entry")
    return parser


def load_prelude() -> Program:
    text = resources.files("lindep").joinpath("prelude.fz").read_text(encoding="utf-8")
    return parse_program(text, "prelude.fz")


def load(args) -> Tuple[Program, Program]:
    try:
        with open(args.file, encoding="utf-8") as fh:
            source = fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read {args.file}: {exc.strerror}") from None
    user = parse_program(source, args.file)
    prelude = Program((), "prelude.fz") if args.no_prelude else load_prelude()
    ambient = {d.name for d in prelude if isinstance(d, Def)}
    for d in user:
        if isinstance(d, Def) and d.name in ambient:
            raise UsageError(f"{args.file}: definition {d.name!r} clashes with the prelude")
    return prelude, user


def check_all(args, prelude: Program, user: Program) -> List[CheckResult]:
    checker = Checker(paper_iter=args.paper_iter)
    globals_: Dict[str, Type] = {}
    checker.check_program(prelude, globals_)
    return checker.check_program(user, globals_)


def _definitions(prelude: Program, user: Program) -> Dict[str, Term]:
    return {d.name: d.body for d in (*prelude, *user) if isinstance(d, Def)}


def _entry(args, user: Program) -> Def:
    if not args.entry:
        raise UsageError(f"{args.command} needs --entry NAME")
    for d in user:
        if isinstance(d, Def) and d.name == args.entry:
            return d
    raise UsageError(f"no definition named {args.entry!r} in {args.file}")


def _dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True)


def cmd_check(args, prelude, user, out: TextIO) -> int:
    results = check_all(args, prelude, user)
    for r in results:
        out.write((_dumps(r.to_json()) if args.json else r.verdict_line()) + "\n")
    return 0 if all(r.accepted for r in results) else 1


def cmd_constraints(args, prelude, user, out: TextIO) -> int:
    for r in check_all(args, prelude, user):
        if r.diagnostic is not None:
            d = r.diagnostic
            out.write(_dumps({"decl": r.name, "error": d.msg, "at": d.at, "rule": d.rule}) + "\n")
            continue
        for c in r.constraints:
            out.write(_dumps({"decl": r.name, **c.to_json()}) + "\n")
    return 0


def cmd_run(args, prelude, user, out: TextIO) -> int:
    entry = _entry(args, user)
    interp = Interpreter(_definitions(prelude, user), args.fuel)
    value = interp.global_value(entry.name)
    if args.json:
        out.write(_dumps({"entry": entry.name, "value": format_value(value)}) + "\n")
    else:
        out.write(format_value(value) + "\n")
    return 0


def _claimed_grade(ty: Type):
    """The grade ``r`` of a declared ``![r] R -o R``, closed and finite."""
    if isinstance(ty, Arrow) and isinstance(ty.cod, Real):
        dom = as_bang(ty.dom)
        if isinstance(dom.body, Real) and not free_index_vars(dom.grade):
            if eval_closed(dom.grade) != INF:
                return dom.grade
    return None


def cmd_probe(args, prelude, user, out: TextIO, err: TextIO) -> int:
    entry = _entry(args, user)
    grade = _claimed_grade(entry.ty)
    if grade is None:
        raise UsageError(f"{entry.name} must be declared at ![r] R -o R with closed finite r")
    verdict = {r.name: r for r in check_all(args, prelude, user)}[entry.name]
    if not verdict.accepted:
        err.write(verdict.verdict_line() + "\n")
        err.write(f"not probing {entry.name}: rejected by the checker\n")
        return 1
    report = probe_sensitivity(entry.body, grade, args.samples, args.tolerance, args.seed,
                               _definitions(prelude, user), args.fuel)
    out.write(_dumps(report.to_json()) + "\n")
    return 0 if report.passed else 1


def cmd_steps(args, prelude, user, out: TextIO) -> int:
    entry = _entry(args, user)
    result = krivine_run(entry.body, args.fuel, _definitions(prelude, user))
    if args.json:
        value = None if result.value is None else format_value(result.value)
        out.write(_dumps({"entry": entry.name, "steps": result.steps, "value": value}) + "\n")
    else:
        out.write(f"{result.steps}\n")
    return 0


def run_cli(argv: Sequence[str], out: Optional[TextIO] = None,
            err: Optional[TextIO] = None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        with contextlib.redirect_stdout(out), contextlib.redirect_stderr(err):
            args = parser.parse_args(list(argv))
    except SystemExit as exc:
        return 0 if exc.code == 0 else 2
    try:
        prelude, user = load(args)
        if args.command == "check":
            return cmd_check(args, prelude, user, out)
        if args.command == "constraints":
            return cmd_constraints(args, prelude, user, out)
        if args.command == "run":
            return cmd_run(args, prelude, user, out)
        if args.command == "probe":
            return cmd_probe(args, prelude, user, out, err)
        if args.command == "steps":
            return cmd_steps(args, prelude, user, out)
    except (UsageError, ParseError) as exc:
        err.write(f"lindep: {exc}\n")
        return 2
    except EvalError as exc:
        err.write(f"lindep: evaluation failed: {exc}\n")
        return 1
    raise AssertionError(args.command)


def main() -> None:
    sys.setrecursionlimit(max(sys.getrecursionlimit(), 20_000))
    sys.exit(run_cli(sys.argv[1:]))
