"""Substitution, sugar elimination, alpha-equivalence and core-form builders."""

from __future__ import annotations

from ..errors import ModalityPresent
from .ast import (
    FALSE, AndA, AndB, Bool, Box, Emp, Eq, Exists, Forall, Iff, Imp, Not,
    NotB, Or, PointsStrong, PointsStrongAny, PointsWeak, PointsWeakAny,
    SepConj, SepImp, Var,
)
from .names import (
    FreshNames, expr_vars, free_vars, rename, subst_bexpr, subst_expr,
)


# ---------------------------------------------------------------------------
# Capture-avoiding substitution


def subst(p, x, e, fresh=None):
    """``p[e/x]``, renaming binders that would capture a variable of ``e``.

    Raises ModalityPresent on a modality; those are resolved by rewriting.
    """
    if fresh is None:
        fresh = FreshNames.above(p, e)
    evars = expr_vars(e)

    def go(q):
        match q:
            case Bool(b):
                return Bool(subst_bexpr(b, x, e))
            case PointsWeak(a, v) | PointsStrong(a, v):
                return type(q)(subst_expr(a, x, e), subst_expr(v, x, e))
            case PointsWeakAny(a) | PointsStrongAny(a):
                return type(q)(subst_expr(a, x, e))
            case Emp():
                return q
            case Imp(l, r) | SepConj(l, r) | SepImp(l, r) | Or(l, r) | AndA(l, r) | Iff(l, r):
                return type(q)(go(l), go(r))
            case Not(a):
                return Not(go(a))
            case Forall(y, body) | Exists(y, body):
                if y == x or x not in free_vars(body):
                    return q
                if y in evars:
                    z = fresh()
                    body = rename(body, y, z)
                    y = z
                return type(q)(y, go(body))
            case Box():
                raise ModalityPresent("substitution into a modality")
        raise TypeError(f"not an assertion: {q!r}")

    return go(p)


# ---------------------------------------------------------------------------
# Core-form builders.  Each returns a core-only assertion.


def neg(p):
    return Imp(p, FALSE)


def conj(p, q):
    if isinstance(p, Bool) and isinstance(q, Bool):
        return Bool(AndB(p.cond, q.cond))
    return neg(Imp(p, neg(q)))


def disj(p, q):
    return Imp(neg(p), q)


def exists(y, p):
    return neg(Forall(y, neg(p)))


def allocated(e, fresh):
    """``e ~> -`` in core form."""
    y = fresh()
    return exists(y, PointsWeak(e, Var(y)))


def not_allocated(e, fresh):
    """``e !~> -`` in core form, as ``forall y. !(e ~> y)``."""
    y = fresh()
    return Forall(y, neg(PointsWeak(e, Var(y))))


def ne(a, b):
    return Bool(NotB(Eq(a, b)))


# ---------------------------------------------------------------------------
# Sugar elimination


def desugar(p, fresh=None):
    """Rewrite every sugar constructor into the core grammar."""
    if fresh is None:
        fresh = FreshNames.above(p)

    def go(q):
        match q:
            case Bool() | PointsWeak():
                return q
            case Imp(l, r):
                return Imp(go(l), go(r))
            case SepConj(l, r):
                return SepConj(go(l), go(r))
            case SepImp(l, r):
                return SepImp(go(l), go(r))
            case Forall(x, body):
                return Forall(x, go(body))
            case Box(s, body):
                return Box(s, go(body))
            case Not(a):
                return Imp(go(a), FALSE)
            case Or(l, r):
                return Imp(Imp(go(l), FALSE), go(r))
            case AndA(l, r):
                return Imp(Imp(go(l), Imp(go(r), FALSE)), FALSE)
            case Iff(l, r):
                a, b = go(l), go(r)
                return Imp(Imp(Imp(a, b), Imp(Imp(b, a), FALSE)), FALSE)
            case Exists(x, body):
                return Imp(Forall(x, Imp(go(body), FALSE)), FALSE)
            case Emp():
                x = fresh()
                return Forall(x, go(Not(PointsWeakAny(Var(x)))))
            case PointsWeakAny(a):
                y = fresh()
                return go(Exists(y, PointsWeak(a, Var(y))))
            case PointsStrong(a, v):
                x = fresh()
                only = Forall(x, Imp(go(PointsWeakAny(Var(x))), Bool(Eq(Var(x), a))))
                return go(AndA(PointsWeak(a, v), only))
            case PointsStrongAny(a):
                y = fresh()
                return go(Exists(y, PointsStrong(a, Var(y))))
        raise TypeError(f"not an assertion: {q!r}")

    return go(p)


def is_core(p):
    match p:
        case Bool() | PointsWeak():
            return True
        case Imp(l, r) | SepConj(l, r) | SepImp(l, r):
            return is_core(l) and is_core(r)
        case Forall(_, body) | Box(_, body):
            return is_core(body)
    return False


def has_modality(p):
    match p:
        case Box():
            return True
        case Imp(l, r) | SepConj(l, r) | SepImp(l, r) | Or(l, r) | AndA(l, r) | Iff(l, r):
            return has_modality(l) or has_modality(r)
        case Not(a):
            return has_modality(a)
        case Forall(_, body) | Exists(_, body):
            return has_modality(body)
    return False


def size(p):
    """Number of assertion nodes (expressions not counted)."""
    match p:
        case Imp(l, r) | SepConj(l, r) | SepImp(l, r) | Or(l, r) | AndA(l, r) | Iff(l, r):
            return 1 + size(l) + size(r)
        case Not(a):
            return 1 + size(a)
        case Forall(_, body) | Exists(_, body) | Box(_, body):
            return 1 + size(body)
    return 1


# ---------------------------------------------------------------------------
# Alpha-equivalence via nameless terms


def _canon(node, env):
    """Replace bound names by their binder depth; free names stay as they are."""
    if isinstance(node, str):
        return ("bound", len(env) - 1 - env[::-1].index(node)) if node in env else ("free", node)
    if isinstance(node, tuple):
        return tuple(_canon(c, env) for c in node)
    if not hasattr(node, "__dataclass_fields__"):
        return node
    if isinstance(node, (Forall, Exists)):
        return (type(node).__name__, _canon(node.body, env + [node.var]))
    fields = tuple(_canon(getattr(node, f), env) for f in node.__dataclass_fields__)
    return (type(node).__name__, fields)


def alpha_equiv(p, q):
    """True iff ``p`` and ``q`` differ only in the names of bound variables."""
    return _canon(p, []) == _canon(q, [])
