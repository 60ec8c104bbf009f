"""One-step contraction of a modality redex, one rule per equivalence."""

from __future__ import annotations

from enum import Enum

from ..errors import UnsupportedModality
from ..syntax import (
    FALSE, Alloc, AndB, Assign, Bool, Box, Dispose, Eq, FalseLit, Forall,
    HeapClear, HeapUpdate, Imp, Lookup, Mutate, PointsWeak, SepConj, SepImp,
    Var, allocated, conj, disj, exists, expr_vars, ne, not_allocated, rename,
    subst_bexpr, subst_expr,
)


class Rule(str, Enum):
    E1 = "E1"
    E2 = "E2"
    E3 = "E3"
    E4 = "E4"
    E5 = "E5"
    E6 = "E6"
    E7 = "E7"
    E8 = "E8"
    E9 = "E9"
    E10 = "E10"
    E11 = "E11"
    E12 = "E12"
    E13 = "E13"
    E14 = "E14"
    E15 = "E15"
    E16 = "E16"
    S1 = "S1"
    S2 = "S2"

    def __str__(self):
        return self.value


SUPPORTED = (Assign, Lookup, Mutate, Alloc, Dispose, HeapUpdate, HeapClear)


def _distribute(stmt, q):
    """Push ``[stmt]`` through a binary connective (E2)."""
    return type(q)(Box(stmt, q.left), Box(stmt, q.right))


def _through_binder(stmt, q, clashes, fresh):
    """Push ``[stmt]`` under a universal quantifier (E3), renaming on a clash."""
    y, body = q.var, q.body
    if y in clashes:
        z = fresh()
        body = rename(body, y, z)
        y = z
    return Forall(y, Box(stmt, body))


def contract(p, fresh):
    """Reduce ``p`` if it is a redex; returns ``(result, rule)`` or None.

    Fresh names are drawn only when a rule actually fires.
    """
    if not isinstance(p, Box):
        return None
    s, q = p.stmt, p.body
    match s:
        case Lookup(x, e):
            y = fresh()
            return exists(y, conj(PointsWeak(e, Var(y)), Box(Assign(x, Var(y)), q))), Rule.E5
        case Mutate(x, e):
            return conj(allocated(Var(x), fresh), Box(HeapUpdate(x, e), q)), Rule.E6
        case Alloc(x, e):
            if x in expr_vars(e):
                raise UnsupportedModality(
                    f"allocation to {x} reads {x}; run `prepare` to simulate it first")
            return Forall(x, Imp(not_allocated(Var(x), fresh), Box(HeapUpdate(x, e), q))), Rule.E7
        case Dispose(x):
            return conj(allocated(Var(x), fresh), Box(HeapClear(x), q)), Rule.E8
        case Assign(x, e):
            return _assign(s, x, e, q, fresh)
        case HeapUpdate(x, e):
            return _update(s, x, e, q, fresh)
        case HeapClear(x):
            return _clear(s, x, q, fresh)
    raise UnsupportedModality(f"no rewrite rule for a modality over {type(s).__name__}")


def _assign(s, x, e, q, fresh):
    match q:
        case Bool(FalseLit()):
            return FALSE, Rule.E1
        case Bool(b):
            return Bool(subst_bexpr(b, x, e)), Rule.E4
        case PointsWeak(a, v):
            return PointsWeak(subst_expr(a, x, e), subst_expr(v, x, e)), Rule.E4
        case Imp() | SepConj() | SepImp():
            return _distribute(s, q), Rule.E2
        case Forall():
            return _through_binder(s, q, {x} | expr_vars(e), fresh), Rule.E3
    return None


def _update(s, x, e, q, fresh):
    loc = Var(x)
    match q:
        case Bool():
            return q, Rule.E9
        case PointsWeak(a, v):
            hit = Bool(AndB(Eq(loc, a), Eq(v, e)))
            return disj(hit, conj(ne(loc, a), q)), Rule.E10
        case Imp():
            return _distribute(s, q), Rule.E2
        case Forall():
            return _through_binder(s, q, {x} | expr_vars(e), fresh), Rule.E3
        case SepConj(l, r):
            left = SepConj(Box(s, l), conj(r, not_allocated(loc, fresh)))
            right = SepConj(conj(l, not_allocated(loc, fresh)), Box(s, r))
            return disj(left, right), Rule.E11
        case SepImp(l, r):
            return SepImp(conj(l, not_allocated(loc, fresh)), Box(s, r)), Rule.E12
    return None


def _clear(s, x, q, fresh):
    loc = Var(x)
    match q:
        case Bool():
            return q, Rule.E13
        case PointsWeak(a, _):
            return conj(ne(loc, a), q), Rule.E14
        case Imp():
            return _distribute(s, q), Rule.E2
        case Forall():
            return _through_binder(s, q, {x}, fresh), Rule.E3
        case SepConj():
            return _distribute(s, q), Rule.E15
        case SepImp(l, r):
            outside = SepImp(conj(l, not_allocated(loc, fresh)), Box(s, r))
            y = fresh()
            upd = HeapUpdate(x, Var(y))
            inside = Forall(y, SepImp(Box(upd, l), Box(upd, r)))
            return conj(outside, inside), Rule.E16
    return None
