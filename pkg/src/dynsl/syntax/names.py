"""Variable sets, fresh names and renaming."""

from __future__ import annotations

import re
from dataclasses import replace
from functools import reduce

from .ast import (
    Add, Alloc, AllocMulti, AndA, AndB, Assign, Bool, Box, Dispose, Emp, Eq,
    Exists, FalseLit, Forall, GeneralMutate, HeapClear, HeapUpdate, If, Iff,
    Imp, IntLit, Lookup, Lt, Mul, Mutate, Not, NotB, Or, PointsStrong,
    PointsStrongAny, PointsWeak, PointsWeakAny, SepConj, SepImp, Seq, Sub,
    TrueLit, Var, While,
)

RESERVED_PREFIX = "$"
_FRESH_RE = re.compile(r"^\$(\d+)$")


class FreshNames:
    """Monotone supply of ``$n`` names for one rewriting session."""

    def __init__(self, start=1):
        self.next = start

    def __call__(self):
        name = f"${self.next}"
        self.next += 1
        return name

    @classmethod
    def above(cls, *nodes):
        """A supply whose names cannot clash with any ``$n`` occurring in ``nodes``."""
        top = 0
        for node in nodes:
            for name in all_names(node):
                m = _FRESH_RE.match(name)
                if m:
                    top = max(top, int(m.group(1)))
        return cls(top + 1)


def is_reserved(name):
    return name.startswith(RESERVED_PREFIX)


# ---------------------------------------------------------------------------
# Variable sets


def expr_vars(e):
    match e:
        case IntLit():
            return frozenset()
        case Var(name):
            return frozenset((name,))
        case Add(l, r) | Sub(l, r) | Mul(l, r):
            return expr_vars(l) | expr_vars(r)
    raise TypeError(f"not an expression: {e!r}")


def bexpr_vars(b):
    match b:
        case TrueLit() | FalseLit():
            return frozenset()
        case Eq(l, r) | Lt(l, r):
            return expr_vars(l) | expr_vars(r)
        case NotB(a):
            return bexpr_vars(a)
        case AndB(l, r):
            return bexpr_vars(l) | bexpr_vars(r)
    raise TypeError(f"not a boolean expression: {b!r}")


def stmt_vars(s):
    """Every variable read or written by ``s`` (invariants included)."""
    match s:
        case Assign(x, e) | Mutate(x, e) | Alloc(x, e) | HeapUpdate(x, e):
            return frozenset((x,)) | expr_vars(e)
        case Lookup(x, e):
            return frozenset((x,)) | expr_vars(e)
        case GeneralMutate(a, e):
            return expr_vars(a) | expr_vars(e)
        case AllocMulti(x, es):
            return reduce(frozenset.union, map(expr_vars, es), frozenset((x,)))
        case Dispose(x) | HeapClear(x):
            return frozenset((x,))
        case Seq(a, b):
            return stmt_vars(a) | stmt_vars(b)
        case If(c, a, b):
            return bexpr_vars(c) | stmt_vars(a) | stmt_vars(b)
        case While(c, inv, body):
            extra = free_vars(inv) if inv is not None else frozenset()
            return bexpr_vars(c) | stmt_vars(body) | extra
    raise TypeError(f"not a statement: {s!r}")


def free_vars(p):
    """Free variables; a modality contributes every variable of its statement."""
    match p:
        case Bool(b):
            return bexpr_vars(b)
        case PointsWeak(a, v) | PointsStrong(a, v):
            return expr_vars(a) | expr_vars(v)
        case PointsWeakAny(a) | PointsStrongAny(a):
            return expr_vars(a)
        case Emp():
            return frozenset()
        case Imp(l, r) | SepConj(l, r) | SepImp(l, r) | Or(l, r) | AndA(l, r) | Iff(l, r):
            return free_vars(l) | free_vars(r)
        case Not(a):
            return free_vars(a)
        case Forall(x, body) | Exists(x, body):
            return free_vars(body) - {x}
        case Box(s, body):
            return stmt_vars(s) | free_vars(body)
    raise TypeError(f"not an assertion: {p!r}")


def all_names(node):
    """Every identifier occurring anywhere in ``node``, bound or free."""
    names = set()

    def walk(n):
        match n:
            case Var(name):
                names.add(name)
            case Forall(x, _) | Exists(x, _):
                names.add(x)
            case Assign(x, _) | Lookup(x, _) | Mutate(x, _) | Alloc(x, _) | \
                    AllocMulti(x, _) | Dispose(x) | HeapUpdate(x, _) | HeapClear(x):
                names.add(x)
        if hasattr(n, "__dataclass_fields__"):
            for f in n.__dataclass_fields__:
                child = getattr(n, f)
                if isinstance(child, tuple):
                    for c in child:
                        walk(c)
                elif hasattr(child, "__dataclass_fields__"):
                    walk(child)

    walk(node)
    return names


# ---------------------------------------------------------------------------
# Substitution on expressions, and plain renaming everywhere


def subst_expr(e, x, by):
    """``e[by/x]``"""
    match e:
        case IntLit():
            return e
        case Var(name):
            return by if name == x else e
        case Add(l, r):
            return Add(subst_expr(l, x, by), subst_expr(r, x, by))
        case Sub(l, r):
            return Sub(subst_expr(l, x, by), subst_expr(r, x, by))
        case Mul(l, r):
            return Mul(subst_expr(l, x, by), subst_expr(r, x, by))
    raise TypeError(f"not an expression: {e!r}")


def subst_bexpr(b, x, by):
    match b:
        case TrueLit() | FalseLit():
            return b
        case Eq(l, r):
            return Eq(subst_expr(l, x, by), subst_expr(r, x, by))
        case Lt(l, r):
            return Lt(subst_expr(l, x, by), subst_expr(r, x, by))
        case NotB(a):
            return NotB(subst_bexpr(a, x, by))
        case AndB(l, r):
            return AndB(subst_bexpr(l, x, by), subst_bexpr(r, x, by))
    raise TypeError(f"not a boolean expression: {b!r}")


def rename_stmt(s, old, new):
    """Rename variable ``old`` to ``new`` throughout a statement."""
    v = Var(new)

    def n(name):
        return new if name == old else name

    match s:
        case Assign(x, e):
            return Assign(n(x), subst_expr(e, old, v))
        case Lookup(x, e):
            return Lookup(n(x), subst_expr(e, old, v))
        case Mutate(x, e):
            return Mutate(n(x), subst_expr(e, old, v))
        case GeneralMutate(a, e):
            return GeneralMutate(subst_expr(a, old, v), subst_expr(e, old, v))
        case Alloc(x, e):
            return Alloc(n(x), subst_expr(e, old, v))
        case AllocMulti(x, es):
            return AllocMulti(n(x), tuple(subst_expr(e, old, v) for e in es))
        case Dispose(x):
            return Dispose(n(x))
        case HeapUpdate(x, e):
            return HeapUpdate(n(x), subst_expr(e, old, v))
        case HeapClear(x):
            return HeapClear(n(x))
        case Seq(a, b):
            return Seq(rename_stmt(a, old, new), rename_stmt(b, old, new))
        case If(c, a, b):
            return If(subst_bexpr(c, old, v), rename_stmt(a, old, new), rename_stmt(b, old, new))
        case While(c, inv, body):
            inv2 = rename(inv, old, new) if inv is not None else None
            return While(subst_bexpr(c, old, v), inv2, rename_stmt(body, old, new))
    raise TypeError(f"not a statement: {s!r}")


def rename(p, old, new):
    """Rename free ``old`` to ``new``; ``new`` must be fresh for ``p``.

    Unlike `subst`, this goes through modalities: a variable-for-fresh-variable
    swap can never be captured, so the statement is renamed as well.
    """
    v = Var(new)
    match p:
        case Bool(b):
            return Bool(subst_bexpr(b, old, v))
        case PointsWeak(a, e) | PointsStrong(a, e):
            return type(p)(subst_expr(a, old, v), subst_expr(e, old, v))
        case PointsWeakAny(a) | PointsStrongAny(a):
            return type(p)(subst_expr(a, old, v))
        case Emp():
            return p
        case Imp(l, r) | SepConj(l, r) | SepImp(l, r) | Or(l, r) | AndA(l, r) | Iff(l, r):
            return type(p)(rename(l, old, new), rename(r, old, new))
        case Not(a):
            return Not(rename(a, old, new))
        case Forall(x, body) | Exists(x, body):
            if x == old:
                return p
            return type(p)(x, rename(body, old, new))
        case Box(s, body):
            return Box(rename_stmt(s, old, new), rename(body, old, new))
    raise TypeError(f"not an assertion: {p!r}")


def with_body(p, body):
    return replace(p, body=body)
