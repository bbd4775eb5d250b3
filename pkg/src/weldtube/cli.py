"""Command-line front end.

Exit codes: 0 success, 1 invalid input or failed check, 2 search budget
exhausted, 3 internal error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Sequence

from .diagram import (
    NAMED_CODES,
    GaussCode,
    GaussCodeError,
    GaussCodeSyntaxError,
    canonical_form,
    parse,
    read_corpus,
    serialize,
)
from .finite import GROUP_PROBES, QUANDLE_PROBES
from .invariants import (
    abelianization,
    alexander_polynomial,
    count_group_homs,
    count_quandle_colorings,
    f_polynomial,
    wirtinger_group,
)
from .moves import END, VIRTUAL, WELDED
from .search import DistinctByInvariant, Exhausted, Found, SearchBudget, search_equivalence
from .tube import (
    containment_diagram,
    euler_characteristic,
    is_stack_form,
    is_virtual_tube_form,
    tube,
    tube_presentation,
    vertical_double,
)

EXIT_OK, EXIT_INVALID, EXIT_EXHAUSTED, EXIT_INTERNAL = 0, 1, 2, 3

MOVE_PRESETS = {"virtual": VIRTUAL, "welded": WELDED, "end": frozenset({END})}

# the only environment knob: worker threads for `table`
THREADS_ENV = "WELDTUBE_THREADS"


class InputError(Exception):
    pass


def _code(text: str) -> GaussCode:
    text = NAMED_CODES.get(text, text)
    try:
        return parse(text)
    except GaussCodeSyntaxError as exc:
        raise InputError(f"{exc}\n  {text}\n  {' ' * exc.position}^") from exc
    except GaussCodeError as exc:
        raise InputError(str(exc)) from exc


# -- invariant report ------------------------------------------------------------

def _poly(p) -> str:
    return str(p)


def _closed_only(fn: Callable[[GaussCode], object]) -> Callable[[GaussCode], object]:
    def wrapped(code: GaussCode):
        if not code.all_closed:
            raise _Inapplicable("defined for closed components only")
        return fn(code)
    return wrapped


class _Inapplicable(Exception):
    pass


def _registry() -> dict[str, Callable[[GaussCode], object]]:
    reg: dict[str, Callable[[GaussCode], object]] = {
        "abelianization": lambda k: str(abelianization(k)),
    }
    for name, make in QUANDLE_PROBES.items():
        reg[f"colorings_{name}"] = lambda k, make=make: count_quandle_colorings(k, make())
    for name, make in GROUP_PROBES.items():
        reg[f"homs_{name}"] = lambda k, make=make: count_group_homs(k, make())
    reg["alexander"] = _closed_only(lambda k: _poly(alexander_polynomial(k)))
    reg["f_polynomial"] = _closed_only(lambda k: _poly(f_polynomial(k)))
    return reg


INVARIANTS = _registry()
GROUPS = {
    "abelianization": ["abelianization"],
    "colorings": [k for k in INVARIANTS if k.startswith("colorings_")],
    "homs": [k for k in INVARIANTS if k.startswith("homs_")],
    "alexander": ["alexander"],
    "f_poly": ["f_polynomial"],
}
TABLE_DEFAULT = ["abelianization", "colorings_R3", "colorings_R5", "homs_S3",
                 "alexander", "f_polynomial"]


@dataclass
class InvariantReport:
    code: str
    values: dict[str, object] = field(default_factory=dict)
    inapplicable: dict[str, str] = field(default_factory=dict)

    def to_json(self) -> dict:
        return {"code": self.code, "invariants": self.values, "inapplicable": self.inapplicable}


def invariant_report(code: GaussCode, names: Sequence[str]) -> InvariantReport:
    report = InvariantReport(serialize(canonical_form(code)))
    for name in names:
        try:
            report.values[name] = INVARIANTS[name](code)
        except _Inapplicable as exc:
            report.inapplicable[name] = str(exc)
    return report


# -- commands --------------------------------------------------------------------

def cmd_parse(args) -> int:
    if args.file:
        with open(args.file, encoding="utf-8") as fh:
            entries = read_corpus(fh.read())
        status = EXIT_OK
        for lineno, text in entries:
            try:
                print(serialize(canonical_form(_code(text))))
            except InputError as exc:
                print(f"line {lineno}: {exc}", file=sys.stderr)
                status = EXIT_INVALID
        return status
    if args.code is None:
        raise InputError("a code or --file is required")
    print(serialize(canonical_form(_code(args.code))))
    return EXIT_OK


def _selected(args) -> list[str]:
    picked = [g for g in GROUPS if getattr(args, g)]
    if args.all or not picked:
        return list(INVARIANTS)
    return [name for g in picked for name in GROUPS[g]]


def cmd_invariants(args) -> int:
    report = invariant_report(_code(args.code), _selected(args))
    if args.json:
        print(json.dumps(report.to_json(), indent=2))
    elif args.tsv:
        names = list(report.values) + list(report.inapplicable)
        print("\t".join(["code"] + names))
        row = [report.code] + [str(report.values[n]) if n in report.values
                               else f"n/a: {report.inapplicable[n]}" for n in names]
        print("\t".join(row))
    else:
        print(f"code: {report.code}")
        for name, value in report.values.items():
            print(f"{name}: {value}")
        for name, reason in report.inapplicable.items():
            print(f"{name}: inapplicable ({reason})")
    return EXIT_OK


def cmd_search(args) -> int:
    source, target = _code(args.source), _code(args.target)
    try:
        budget = SearchBudget(args.depth, args.nodes)
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    result = search_equivalence(source, target, MOVE_PRESETS[args.moves], budget)
    if args.json:
        print(json.dumps(result.to_json(), indent=2))
    elif isinstance(result, Found):
        print(f"Found ({len(result.certificate)} moves)")
        for mv, code in result.steps():
            print(f"  {mv}  ->  {serialize(code)}")
    elif isinstance(result, DistinctByInvariant):
        print(f"DistinctByInvariant {result.name}")
        print(f"  source: {result.source_value}")
        print(f"  target: {result.target_value}")
    else:
        print(f"Exhausted after {result.nodes} nodes at depth {result.depth}")
    return EXIT_EXHAUSTED if isinstance(result, Exhausted) else EXIT_OK


def cmd_tube(args) -> int:
    code = _code(args.code)
    try:
        t = tube(code, args.n)
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    d = containment_diagram(t)
    out = {
        "code": serialize(canonical_form(code)),
        "complex": t.to_json(),
        "containment": d.to_json(),
        "euler_characteristic": euler_characteristic(t),
        "virtual_tube_form": is_virtual_tube_form(d),
    }
    status = EXIT_OK
    if args.check:
        lhs = tube_presentation(t).relabeled()
        rhs = wirtinger_group(code).relabeled()
        equal = lhs == rhs
        out["presentations_equal"] = equal
        print(f"presentations equal: {str(equal).lower()}", file=sys.stderr)
        if not equal:
            status = EXIT_INVALID
    print(json.dumps(out, indent=2))
    return status


def cmd_vd(args) -> int:
    code = _code(args.code)
    try:
        doubled, pairing = vertical_double(code)
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    d = containment_diagram(tube(doubled, 2), pairing)
    print(json.dumps({
        "code": serialize(doubled),
        "pairing": pairing.to_json(),
        "containment": d.to_json(),
        "stack_form": is_stack_form(d),
    }, indent=2))
    return EXIT_OK


def _table_row(lineno: int, text: str, names: Sequence[str]) -> list[str]:
    try:
        code = parse(NAMED_CODES.get(text, text))
        report = invariant_report(code, names)
    except GaussCodeError as exc:
        return [str(lineno), text] + [""] * len(names) + [str(exc)]
    cells = [str(report.values[n]) if n in report.values else "n/a" for n in names]
    return [str(lineno), report.code] + cells + [""]


def cmd_table(args) -> int:
    names = args.invariants.split(",") if args.invariants else TABLE_DEFAULT
    unknown = [n for n in names if n not in INVARIANTS]
    if unknown:
        raise InputError(f"unknown invariant(s): {', '.join(unknown)}")
    with open(args.file, encoding="utf-8") as fh:
        entries = read_corpus(fh.read())
    threads = max(1, int(os.environ.get(THREADS_ENV, "1")))
    with ThreadPoolExecutor(threads) as pool:
        rows = list(pool.map(lambda e: _table_row(e[0], e[1], names), entries))
    print("\t".join(["line", "code"] + list(names) + ["error"]))
    for row in rows:
        print("\t".join(row))
    ok = any(not row[-1] for row in rows)
    return EXIT_OK if ok or not rows else EXIT_INVALID


# -- entry point -----------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="weldtube", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("parse", help="print the canonical form of a code")
    p.add_argument("code", nargs="?")
    p.add_argument("--file", help="corpus file, one code per line")
    p.set_defaults(func=cmd_parse)

    p = sub.add_parser("invariants", help="compute invariants of a code")
    p.add_argument("code")
    p.add_argument("--all", action="store_true")
    p.add_argument("--abelianization", action="store_true")
    p.add_argument("--colorings", action="store_true")
    p.add_argument("--homs", action="store_true")
    p.add_argument("--alexander", action="store_true")
    p.add_argument("--f-poly", dest="f_poly", action="store_true")
    fmt = p.add_mutually_exclusive_group()
    fmt.add_argument("--json", action="store_true")
    fmt.add_argument("--tsv", action="store_true")
    p.set_defaults(func=cmd_invariants)

    p = sub.add_parser("search", help="search for a move sequence between two codes")
    p.add_argument("source")
    p.add_argument("target")
    p.add_argument("--moves", choices=sorted(MOVE_PRESETS), default="virtual")
    p.add_argument("--depth", type=int, default=10)
    p.add_argument("--nodes", type=int, default=10**6)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("tube", help="build the tube complex of a code")
    p.add_argument("code")
    p.add_argument("-n", type=int, default=2)
    p.add_argument("--check", action="store_true",
                   help="compare the tube presentation with the Wirtinger presentation")
    p.set_defaults(func=cmd_tube)

    p = sub.add_parser("vd", help="vertical double and its stack-form check")
    p.add_argument("code")
    p.set_defaults(func=cmd_vd)

    p = sub.add_parser("table", help="tabulate invariants over a corpus file")
    p.add_argument("file")
    p.add_argument("--invariants", help=f"comma list from: {', '.join(INVARIANTS)}")
    p.set_defaults(func=cmd_table)
    return ap


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_INVALID
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except Exception as exc:  # noqa: BLE001
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
