"""The ``dsl`` command line tool."""

from __future__ import annotations

import argparse
import json
import os
import re
import sys

from . import oracle, vc
from .errors import DSLError, DSLSyntaxError, FuelExhaustedError
from .rewrite import INNERMOST, STRATEGIES, normalize, resugar, simplify
from .semantics import (
    Bounds, Fail, Heap, State, Store, exec_stmt, iter_outcomes_sorted,
    parse_heap, parse_store, state_to_json,
)
from .syntax import parse_assertion, parse_program, show, stmt_vars

EXIT_OK, EXIT_INVALID, EXIT_INCONCLUSIVE, EXIT_USAGE = 0, 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


class _Usage(Exception):
    pass


def _source(arg):
    """File contents if ``arg`` names an existing file, else ``arg`` itself."""
    if os.path.isfile(arg):
        with open(arg, encoding="utf-8") as fh:
            return fh.read()
    return arg


def _formula(arg):
    return parse_assertion(_source(arg))


def _program(arg):
    return parse_program(_source(arg))


def _bounds(args):
    try:
        return Bounds(args.bound, args.fuel)
    except ValueError as ex:
        raise _Usage(str(ex)) from None


def _render(p, args):
    return show(simplify(p) if getattr(args, "simplify", False) else resugar(p))


def _emit(args, payload, lines):
    if args.json:
        print(json.dumps(payload, indent=2, sort_keys=True))
    else:
        for line in lines:
            print(line)


# ---------------------------------------------------------------------------
# Commands


def cmd_normalize(args):
    p = _formula(args.formula)
    nf, trace = normalize(p, strategy=args.strategy)
    text = _render(nf, args)
    lines = [step.describe() for step in trace] if args.trace else []
    lines.append(text)
    payload = {"input": show(p), "normal_form": text, "steps": len(trace)}
    if args.trace:
        payload["trace"] = [step.to_json() for step in trace]
    _emit(args, payload, lines)
    return EXIT_OK


def cmd_wp(args):
    prog, post = _program(args.program), _formula(args.post)
    pre, vcs = vc.wp(prog, post)
    text = _render(pre, args)
    shown = [(label, _render(f, args)) for label, f in vcs]
    lines = [f"wp: {text}"] + [f"vc {label}: {f}" for label, f in shown]
    _emit(args, {"wp": text, "vcs": [{"label": k, "formula": f} for k, f in shown]}, lines)
    return EXIT_OK


def cmd_sp(args):
    stmt, pre = _program(args.stmt), _formula(args.pre)
    required, post = (vc.sp_global if args.glob else vc.sp)(stmt, pre)
    req, out = _render(required, args), _render(post, args)
    _emit(args, {"pre": req, "post": out}, [f"pre: {req}", f"post: {out}"])
    return EXIT_OK


def _verdict_code(v):
    if isinstance(v, (oracle.Valid, vc.Verified)):
        return EXIT_OK
    if isinstance(v, oracle.Inconclusive):
        return EXIT_INCONCLUSIVE
    return EXIT_INVALID


def cmd_equiv(args):
    bounds = _bounds(args)
    p, q = _formula(args.left), _formula(args.right)
    v = oracle.equiv(p, q, bounds)
    banner = f"(bounded B={bounds.universe_size})"
    if isinstance(v, oracle.Invalid):
        payload = {"verdict": "Invalid", "bound": bounds.universe_size,
                   "counterexample": v.to_json()}
        lines = [f"Invalid {banner}", f"counterexample: {v.heap!r} {_store_text(v)}"]
    else:
        payload = {"verdict": type(v).__name__, "bound": bounds.universe_size}
        lines = [f"{v} {banner}"]
    _emit(args, payload, lines)
    return _verdict_code(v)


def _store_text(v):
    return "store{" + ", ".join(f"{x}:{v.store[x]}" for x in sorted(v.names)) + "}"


_HEADER = re.compile(r"^\s*(requires|ensures)\s*:(.*)$")


def parse_annotated(text):
    """Read an annotated program into a Triple.

    The ``requires:`` clause is the rest of its line; the ``ensures:`` clause
    runs from its line to the end of the file; everything else is program.
    ``#`` starts a comment.
    """
    parts = {"requires": [], "ensures": [], "program": []}
    current = "program"
    for raw in text.splitlines():
        line = raw.split("#", 1)[0]
        m = _HEADER.match(line)
        if m and current != "ensures":
            parts[m.group(1)].append(m.group(2))
            current = "ensures" if m.group(1) == "ensures" else "program"
            continue
        parts[current].append(line)
    for key in ("requires", "ensures"):
        if not "".join(parts[key]).strip():
            raise DSLSyntaxError(f"annotated program lacks a `{key}:` clause")
    return vc.Triple(parse_assertion("\n".join(parts["requires"])),
                     parse_program("\n".join(parts["program"])),
                     parse_assertion("\n".join(parts["ensures"])))


def cmd_verify(args):
    bounds = _bounds(args)
    triple = parse_annotated(_source(args.file))
    report = vc.verify_triple(triple, bounds, report=True)
    lines = [f"{label}: {v}" for label, v in report.checks]
    banner = f"(bounded B={bounds.universe_size})"
    v = report.verdict
    lines.append(f"{'Verified' if isinstance(v, vc.Verified) else v} {banner}")
    payload = {
        "verdict": type(v).__name__,
        "bound": bounds.universe_size,
        "checks": [{"label": k, "verdict": type(c).__name__} for k, c in report.checks],
    }
    if isinstance(v, vc.Refuted):
        payload["counterexample"] = v.to_json()
    _emit(args, payload, lines)
    return _verdict_code(v)


def _outcome_text(o, names):
    if isinstance(o, State):
        store = "store{" + ", ".join(f"{x}:{o.store[x]}" for x in names) + "}"
        return f"{o.heap!r} {store}"
    return repr(o)


def _outcome_json(o, names):
    if isinstance(o, State):
        return state_to_json(o.heap, o.store, names)
    return "fail" if isinstance(o, Fail) else "fuel-exhausted"


def cmd_exec(args):
    bounds = _bounds(args)
    prog = _program(args.program)
    h = parse_heap(args.heap) if args.heap else Heap()
    s = parse_store(args.store) if args.store else Store()
    # zero bindings are implicit in a Store, so take the names from the text
    given = set(re.findall(r"([A-Za-z_$][\w']*)\s*:", args.store or ""))
    names = sorted(stmt_vars(prog) | given)
    outs = list(iter_outcomes_sorted(exec_stmt(prog, h, s, bounds)))
    _emit(args, {"outcomes": [_outcome_json(o, names) for o in outs]},
          [_outcome_text(o, names) for o in outs])
    return EXIT_OK


# ---------------------------------------------------------------------------


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-b", "--bound", type=int, default=3,
                        help="universe size B: locations and values range over 0..B-1")
    common.add_argument("--fuel", type=int, default=8, help="maximum iterations per loop entry")
    common.add_argument("--json", action="store_true", help="machine-readable output")

    parser = _Parser(prog="dsl", description="Dynamic separation logic toolkit.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("normalize", parents=[common], help="eliminate modalities")
    p.add_argument("formula")
    p.add_argument("--trace", action="store_true", help="print every rewrite step")
    p.add_argument("--strategy", choices=STRATEGIES, default=INNERMOST)
    p.add_argument("--simplify", action="store_true", help="apply sound cleanups")
    p.set_defaults(run=cmd_normalize)

    p = sub.add_parser("wp", parents=[common], help="weakest precondition and VCs")
    p.add_argument("program")
    p.add_argument("post")
    p.add_argument("--simplify", action="store_true")
    p.set_defaults(run=cmd_wp)

    p = sub.add_parser("sp", parents=[common], help="strongest postcondition of a basic instruction")
    p.add_argument("stmt")
    p.add_argument("pre")
    p.add_argument("--global", dest="glob", action="store_true",
                   help="use the classical separation-logic axioms")
    p.add_argument("--simplify", action="store_true")
    p.set_defaults(run=cmd_sp)

    p = sub.add_parser("equiv", parents=[common], help="bounded equivalence check")
    p.add_argument("left")
    p.add_argument("right")
    p.set_defaults(run=cmd_equiv)

    p = sub.add_parser("verify", parents=[common], help="verify an annotated program")
    p.add_argument("file")
    p.set_defaults(run=cmd_verify)

    p = sub.add_parser("exec", parents=[common], help="run a program from a given state")
    p.add_argument("program")
    p.add_argument("--heap", help="initial heap, e.g. 'heap{1:2}'")
    p.add_argument("--store", help="initial store, e.g. 'store{x:1}'")
    p.set_defaults(run=cmd_exec)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.run(args)
    except FuelExhaustedError as ex:
        print(f"dsl: inconclusive: {ex}", file=sys.stderr)
        return EXIT_INCONCLUSIVE
    except (DSLError, _Usage, OSError) as ex:
        print(f"dsl: error: {ex}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
