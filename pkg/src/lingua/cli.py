"""Command-line front door: run, check, restore, ast and a line REPL.

Exit codes: 0 clean run, 1 an abstract error is left in the register,
2 parse diagnostics, 3 fuel exhausted, 4 I/O failure.
"""

from __future__ import annotations

import argparse
import os
import sys
from dataclasses import dataclass
from typing import Optional, TextIO

from .diagnostics import LinguaParseError, format_diagnostic
from .kernel import (
    AbstractError,
    ArrayBody,
    ArrayData,
    BoolData,
    Body,
    Composite,
    Data,
    Limits,
    ListBody,
    ListData,
    NumberData,
    OMEGA,
    RecordBody,
    RecordData,
    SimpleBody,
    Value,
    WordData,
)
from . import nodes as n
from .parser import parse_any, parse_program
from .printer import ast_dump, print_concrete
from .semantics import Evaluator, OutOfFuel
from .state import State, empty_state, is_error, register_word

DEFAULT_FUEL = 10_000_000

# Lingua recursion rides the host stack; give it room and treat running out
# as a resource outcome alongside fuel exhaustion.
RECURSION_LIMIT = 20_000


@dataclass
class RunConfig:
    fuel: Optional[int] = DEFAULT_FUEL
    limits: Limits = Limits()
    trace: bool = False
    format: str = "sexpr"


def format_data(dat: Data) -> str:
    match dat:
        case BoolData(value):
            return "true" if value else "false"
        case NumberData(value):
            return value.text()
        case WordData(text):
            return f"'{text}'"
        case ListData(items):
            return "(" + ", ".join(format_data(i) for i in items) + ")"
        case ArrayData(items):
            return "[" + ", ".join(format_data(i) for i in items) + "]"
        case RecordData(fields):
            inner = ", ".join(f"{name}: {format_data(d)}" for name, d in fields)
            return "{" + inner + "}"
    raise TypeError(f"not a datum: {dat!r}")


def format_body(bod: Body) -> str:
    match bod:
        case SimpleBody(name):
            return name
        case ListBody(element):
            return f"list of {format_body(element)}"
        case ArrayBody(element):
            return f"array of {format_body(element)}"
        case RecordBody(fields):
            inner = ", ".join(f"{name}: {format_body(b)}" for name, b in fields)
            return "{" + inner + "}"
    raise TypeError(f"not a body: {bod!r}")


def format_composite(com: Composite) -> str:
    return f"({format_data(com.dat)}, {format_body(com.bod)})"


def format_value(val: Value) -> str:
    content = "Ω" if val.content is OMEGA else format_data(val.content)
    return f"({content}, {format_body(val.typ.bod)}) with {val.typ.tra.source}"


def state_report(sta: State) -> list[str]:
    lines = [
        f"{ide} = {format_value(val)}"
        for ide, val in sorted(sta.store.valuation.items())
    ]
    lines.append(f"register = {register_word(sta)}")
    return lines


def _read_file(path: str, err: TextIO) -> Optional[str]:
    try:
        with open(path, encoding="utf-8") as handle:
            return handle.read()
    except OSError as exc:
        print(f"lingua: cannot read {path}: {exc}", file=err)
        return None


def _resolve_fuel(flag: Optional[str]) -> Optional[int]:
    raw = flag if flag is not None else os.environ.get("LINGUA_FUEL")
    if raw is None:
        return DEFAULT_FUEL
    if raw == "unlimited":
        return None
    return int(raw)


def cmd_run(path: str, config: RunConfig, out: TextIO, err: TextIO) -> int:
    text = _read_file(path, err)
    if text is None:
        return 4
    try:
        prg = parse_program(text)
    except LinguaParseError as exc:
        print(format_diagnostic(exc.diagnostic, path), file=err)
        return 2
    trace = None
    if config.trace:
        trace = lambda ins: print(
            f"trace: {print_concrete(ins)[:72]}", file=err
        )
    evaluator = Evaluator(limits=config.limits, fuel=config.fuel, trace=trace)
    sys.setrecursionlimit(RECURSION_LIMIT)
    try:
        final = evaluator.run_program(prg, empty_state())
    except OutOfFuel:
        print("lingua: fuel exhausted", file=err)
        return 3
    except RecursionError:
        print("lingua: evaluation too deep", file=err)
        return 3
    for line in state_report(final):
        print(line, file=out)
    return 1 if is_error(final) else 0


def cmd_check(path: str, out: TextIO, err: TextIO) -> int:
    text = _read_file(path, err)
    if text is None:
        return 4
    try:
        parse_any(text)
    except LinguaParseError as exc:
        print(format_diagnostic(exc.diagnostic, path), file=err)
        return 2
    return 0


def cmd_restore(path: str, out: TextIO, err: TextIO) -> int:
    text = _read_file(path, err)
    if text is None:
        return 4
    try:
        _, node = parse_any(text)
    except LinguaParseError as exc:
        print(format_diagnostic(exc.diagnostic, path), file=err)
        return 2
    print(print_concrete(node), file=out)
    return 0


def cmd_ast(path: str, format: str, out: TextIO, err: TextIO) -> int:
    text = _read_file(path, err)
    if text is None:
        return 4
    try:
        _, node = parse_any(text)
    except LinguaParseError as exc:
        print(format_diagnostic(exc.diagnostic, path), file=err)
        return 2
    print(ast_dump(node, format), file=out)
    return 0


def repl(
    config: RunConfig,
    stdin: TextIO,
    out: TextIO,
    err: TextIO,
) -> int:
    """One preamble item or instruction per line against a persistent state.

    `:state` prints the report, `:ok` clears the register, `:quit` leaves.
    Bare expressions are evaluated and shown as a convenience.
    """
    from .state import clear_error

    sta = empty_state()
    evaluator = Evaluator(limits=config.limits, fuel=config.fuel)
    sys.setrecursionlimit(RECURSION_LIMIT)
    interactive = stdin.isatty()
    while True:
        if interactive:
            print("lingua> ", end="", file=out, flush=True)
        line = stdin.readline()
        if not line:
            return 0
        line = line.strip()
        if not line:
            continue
        if line == ":quit":
            return 0
        if line == ":state":
            for report_line in state_report(sta):
                print(report_line, file=out)
            continue
        if line == ":ok":
            sta = clear_error(sta)
            continue
        try:
            kind, node = parse_any(line)
        except LinguaParseError as exc:
            print(format_diagnostic(exc.diagnostic, "<repl>"), file=err)
            continue
        try:
            if kind == "program":
                sta = evaluator.run_program(node, sta)
            elif kind == "preamble":
                sta = evaluator.exec_preamble(node, sta)
            elif kind == "instruction":
                sta = evaluator.exec_instruction(node, sta)
            elif kind == "data":
                result = evaluator.eval_data_exp(node, sta)
                if isinstance(result, AbstractError):
                    print(f"error: {result.word}", file=out)
                else:
                    print(format_composite(result), file=out)
                continue
            else:
                print(f"cannot execute a {kind} expression here", file=err)
                continue
        except OutOfFuel:
            print("lingua: fuel exhausted", file=err)
            continue
        except RecursionError:
            print("lingua: evaluation too deep", file=err)
            continue
        if is_error(sta):
            print(f"error: {register_word(sta)}", file=out)
    return 0


def _build_arg_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="lingua")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="parse and execute a program")
    run.add_argument("file")
    run.add_argument("--fuel", default=None, help="step budget or 'unlimited'")
    run.add_argument("--max-digits", type=int, default=None)
    run.add_argument("--trace", action="store_true")

    check = sub.add_parser("check", help="parse only")
    check.add_argument("file")

    restore = sub.add_parser("restore", help="print the concrete form")
    restore.add_argument("file")

    ast = sub.add_parser("ast", help="dump the syntax tree")
    ast.add_argument("file")
    ast.add_argument("--format", choices=("json", "sexpr"), default="sexpr")

    repl_cmd = sub.add_parser("repl", help="interactive session")
    repl_cmd.add_argument("--fuel", default=None, help="step budget or 'unlimited'")
    return parser


def main(argv: Optional[list[str]] = None) -> int:
    args = _build_arg_parser().parse_args(argv)
    out, err = sys.stdout, sys.stderr
    if args.command == "run":
        limits = Limits()
        if args.max_digits is not None:
            limits = Limits(max_significant_digits=args.max_digits)
        config = RunConfig(
            fuel=_resolve_fuel(args.fuel), limits=limits, trace=args.trace
        )
        return cmd_run(args.file, config, out, err)
    if args.command == "check":
        return cmd_check(args.file, out, err)
    if args.command == "restore":
        return cmd_restore(args.file, out, err)
    if args.command == "ast":
        return cmd_ast(args.file, args.format, out, err)
    if args.command == "repl":
        config = RunConfig(fuel=_resolve_fuel(args.fuel))
        return repl(config, sys.stdin, out, err)
    raise AssertionError(f"unhandled command {args.command}")


if __name__ == "__main__":
    sys.exit(main())
