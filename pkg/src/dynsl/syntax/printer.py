"""Concrete ASCII syntax for expressions, statements and assertions.

The output is accepted by `dynsl.syntax.parser`; for canonical trees
``parse(show(a)) == a``.  Products inside atomic formulas are always
parenthesised, matching the parser's rule that atom operands are sums.
"""

from __future__ import annotations

from .ast import (
    Add, Alloc, AllocMulti, AndA, AndB, Assign, Bool, Box, Dispose, Emp, Eq,
    Exists, FalseLit, Forall, GeneralMutate, HeapClear, HeapUpdate, If, Iff,
    Imp, IntLit, Lookup, Lt, Mul, Mutate, Not, NotB, Or, PointsStrong,
    PointsStrongAny, PointsWeak, PointsWeakAny, SepConj, SepImp, Seq, Sub,
    TrueLit, Var, While,
)

# Assertion precedence, loosest first.
P_IFF, P_IMP, P_OR, P_AND, P_SEPIMP, P_SEPCONJ, P_UNARY, P_ATOM = range(8)


def show_expr(e, atom_operand=False):
    """Print ``e``; inside atoms (``atom_operand``) products get parentheses."""

    def go(e, prec):
        match e:
            case IntLit(v):
                return str(v)
            case Var(name):
                return name
            case Add(l, r) | Sub(l, r):
                op = "+" if isinstance(e, Add) else "-"
                s = f"{go(l, 1)} {op} {go(r, 2)}"
                return f"({s})" if prec > 1 else s
            case Mul(l, r):
                s = f"{go(l, 2)} * {go(r, 3)}"
                return f"({s})" if prec > 2 or atom_operand else s
        raise TypeError(f"not an expression: {e!r}")

    return go(e, 1)


def _bexpr(b, prec):
    match b:
        case TrueLit():
            return "true"
        case FalseLit():
            return "false"
        case Eq(l, r):
            s = f"{show_expr(l, True)} = {show_expr(r, True)}"
        case Lt(l, r):
            s = f"{show_expr(l, True)} < {show_expr(r, True)}"
        case NotB(a):
            inner = _bexpr(a, P_UNARY)
            if isinstance(a, (Eq, Lt)):
                inner = f"({inner})"
            return f"!{inner}"
        case AndB(l, r):
            s = f"{_bexpr(l, P_AND)} && {_bexpr(r, P_SEPIMP)}"
            return f"({s})" if prec > P_AND else s
        case _:
            raise TypeError(f"not a boolean expression: {b!r}")
    return f"({s})" if prec > P_ATOM - 1 else s


def show_bexpr(b):
    return _bexpr(b, P_IFF)


def show_stmt(s):
    def go(s, nested):
        match s:
            case Assign(x, e):
                return f"{x} := {show_expr(e)}"
            case Lookup(x, e):
                return f"{x} := [{show_expr(e)}]"
            case Mutate(x, e):
                return f"[{x}] := {show_expr(e)}"
            case GeneralMutate(a, e):
                return f"[{show_expr(a)}] := {show_expr(e)}"
            case Alloc(x, e):
                return f"{x} := cons({show_expr(e)})"
            case AllocMulti(x, es):
                return f"{x} := cons({', '.join(show_expr(e) for e in es)})"
            case Dispose(x):
                return f"dispose({x})"
            case HeapUpdate(x, e):
                return f"upd {x} := {show_expr(e)}"
            case HeapClear(x):
                return f"clr {x}"
            case Seq(a, b):
                text = f"{go(a, True)}; {go(b, False)}"
                return f"({text})" if nested else text
            case If(c, a, b):
                return f"if {show_bexpr(c)} then {go(a, False)} else {go(b, False)} fi"
            case While(c, inv, body):
                inv_text = f" invariant {show(inv)}" if inv is not None else ""
                return f"while {show_bexpr(c)}{inv_text} do {go(body, False)} od"
        raise TypeError(f"not a statement: {s!r}")

    return go(s, False)


def _assert(p, prec):
    def wrap(text, own):
        return f"({text})" if prec > own else text

    match p:
        case Bool(b):
            return _bexpr(b, prec)
        case PointsWeak(a, v):
            return wrap(f"{show_expr(a, True)} ~> {show_expr(v, True)}", P_ATOM - 1)
        case PointsStrong(a, v):
            return wrap(f"{show_expr(a, True)} |-> {show_expr(v, True)}", P_ATOM - 1)
        case PointsWeakAny(a):
            return wrap(f"{show_expr(a, True)} ~> -", P_ATOM - 1)
        case PointsStrongAny(a):
            return wrap(f"{show_expr(a, True)} |-> -", P_ATOM - 1)
        case Emp():
            return "emp"
        case Iff(l, r):
            return wrap(f"{_assert(l, P_IMP)} <-> {_assert(r, P_IMP)}", P_IFF)
        case Imp(l, r):
            return wrap(f"{_assert(l, P_OR)} -> {_assert(r, P_IMP)}", P_IMP)
        case Or(l, r):
            return wrap(f"{_assert(l, P_OR)} \\/ {_assert(r, P_AND)}", P_OR)
        case AndA(l, r):
            return wrap(f"{_assert(l, P_AND)} /\\ {_assert(r, P_SEPIMP)}", P_AND)
        case SepImp(l, r):
            return wrap(f"{_assert(l, P_SEPCONJ)} -* {_assert(r, P_SEPIMP)}", P_SEPIMP)
        case SepConj(l, r):
            return wrap(f"{_assert(l, P_SEPCONJ)} * {_assert(r, P_UNARY)}", P_SEPCONJ)
        case Not(a):
            return f"!{_assert(a, P_UNARY)}"
        case Forall(x, body) | Exists(x, body):
            q = "forall" if isinstance(p, Forall) else "exists"
            inner = show(body)
            if not isinstance(body, (Forall, Exists)):
                inner = f"({inner})"
            text = f"{q} {x} {inner}"
            # A quantifier body extends maximally to the right.
            return text if prec == P_IFF else f"({text})"
        case Box(s, body):
            inner = _assert(body, P_UNARY) if isinstance(body, Box) else f"({show(body)})"
            return f"[{show_stmt(s)}]{inner}"
    raise TypeError(f"not an assertion: {p!r}")


def show(node):
    """Print an assertion or a statement."""
    if isinstance(node, (Assign, Lookup, Mutate, GeneralMutate, Alloc, AllocMulti,
                         Dispose, HeapUpdate, HeapClear, Seq, If, While)):
        return show_stmt(node)
    return _assert(node, P_IFF)
