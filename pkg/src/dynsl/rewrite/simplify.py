"""Readable output: recover sugar from core terms and clean up.

`simplify` is deliberately separate from normalization; none of its rules
are needed for completeness and tests exercise raw normal forms.
"""

from __future__ import annotations

from ..syntax import (
    FALSE, TRUE, Add, AndA, AndB, Bool, Box, Emp, Eq, Exists, FalseLit,
    Forall, HeapClear, HeapUpdate, Iff, Imp, IntLit, Lt, Mul, Not, NotB, Or,
    PointsStrong, PointsStrongAny, PointsWeak, PointsWeakAny, SepConj, SepImp,
    Sub, TrueLit, Var, expr_vars, free_vars,
)


def _is_false(p):
    return isinstance(p, Bool) and isinstance(p.cond, FalseLit)


def _is_true(p):
    return isinstance(p, Bool) and isinstance(p.cond, TrueLit)


def resugar(p):
    """Recognize the core encodings of the derived connectives."""
    match p:
        case Imp(a, f) if _is_false(f):
            match a:
                case Imp(l, Imp(r, f2)) if _is_false(f2):
                    return _tidy(AndA(resugar(l), resugar(r)))
                case Forall(y, Imp(body, f2)) if _is_false(f2):
                    return _tidy(Exists(y, resugar(body)))
                case Bool(b):
                    return Bool(NotB(b))
            return Not(resugar(a))
        case Imp(Imp(Imp(l, Imp(r, f2)), f), b) if _is_false(f) and _is_false(f2):
            # a conjunction in antecedent position reads better than a disjunction
            return Imp(_tidy(AndA(resugar(l), resugar(r))), resugar(b))
        case Imp(Imp(a, f), b) if _is_false(f):
            return Or(resugar(a), resugar(b))
        case Imp(l, r) | SepConj(l, r) | SepImp(l, r) | Or(l, r) | AndA(l, r) | Iff(l, r):
            return type(p)(resugar(l), resugar(r))
        case Not(a):
            return Not(resugar(a))
        case Forall(y, body) | Exists(y, body):
            return _tidy(type(p)(y, resugar(body)))
        case Box(s, body):
            return Box(s, resugar(body))
    return p


def _tidy(p):
    match p:
        case Exists(y, PointsWeak(e, Var(v))) if v == y and y not in expr_vars(e):
            return PointsWeakAny(e)
        case Exists(y, PointsStrong(e, Var(v))) if v == y and y not in expr_vars(e):
            return PointsStrongAny(e)
        case Forall(y, Imp(PointsWeak(e, Var(v)), f)) if v == y and _is_false(f) \
                and y not in expr_vars(e):
            return Not(PointsWeakAny(e))
        case Forall(y, Not(PointsWeak(e, Var(v)))) if v == y and y not in expr_vars(e):
            return Not(PointsWeakAny(e))
        case Forall(y, Not(PointsWeakAny(Var(v)))) if v == y:
            return Emp()
        case AndA(PointsWeak(e, v), Forall(y, Imp(PointsWeakAny(Var(w)), Bool(Eq(Var(u), e2))))) \
                if w == y == u and e2 == e and y not in expr_vars(e):
            return PointsStrong(e, v)
    return p


def _fold_expr(e):
    match e:
        case Add(l, r) | Sub(l, r) | Mul(l, r):
            l, r = _fold_expr(l), _fold_expr(r)
            if isinstance(l, IntLit) and isinstance(r, IntLit):
                op = {Add: int.__add__, Sub: int.__sub__, Mul: int.__mul__}[type(e)]
                return IntLit(op(l.value, r.value))
            return type(e)(l, r)
    return e


def _simp_b(b):
    match b:
        case Eq(l, r) | Lt(l, r):
            l, r = _fold_expr(l), _fold_expr(r)
            if isinstance(b, Eq) and l == r:
                return TrueLit()
            if isinstance(l, IntLit) and isinstance(r, IntLit):
                ok = l.value == r.value if isinstance(b, Eq) else l.value < r.value
                return TrueLit() if ok else FalseLit()
            return type(b)(l, r)
        case NotB(a):
            a = _simp_b(a)
            match a:
                case TrueLit():
                    return FalseLit()
                case FalseLit():
                    return TrueLit()
                case NotB(inner):
                    return inner
            return NotB(a)
        case AndB(l, r):
            l, r = _simp_b(l), _simp_b(r)
            if isinstance(l, FalseLit) or isinstance(r, FalseLit):
                return FalseLit()
            if isinstance(l, TrueLit):
                return r
            if isinstance(r, TrueLit):
                return l
            return AndB(l, r)
    return b


def _not_alloc_of(p):
    match p:
        case Not(PointsWeakAny(Var(x))):
            return x
    return None


def _step(p):
    """One bottom-up simplification pass."""
    match p:
        case Bool(b):
            return Bool(_simp_b(b))
        case PointsWeak(a, v) | PointsStrong(a, v):
            return type(p)(_fold_expr(a), _fold_expr(v))
        case Not(a):
            a = _step(a)
            match a:
                case Not(inner):
                    return inner
                case Bool(b):
                    return Bool(_simp_b(NotB(b)))
            return Not(a)
        case AndA(l, r):
            l, r = _step(l), _step(r)
            if _is_false(l) or _is_false(r):
                return FALSE
            if _is_true(l):
                return r
            if _is_true(r):
                return l
            # (x !~> -) /\ [clr x]p  ==>  (x !~> -) /\ p
            x = _not_alloc_of(l)
            if x is not None and isinstance(r, Box) and r.stmt == HeapClear(x):
                return AndA(l, r.body)
            x = _not_alloc_of(r)
            if x is not None and isinstance(l, Box) and l.stmt == HeapClear(x):
                return AndA(l.body, r)
            return AndA(l, r)
        case Or(l, r):
            l, r = _step(l), _step(r)
            if _is_true(l) or _is_true(r):
                return TRUE
            if _is_false(l):
                return r
            if _is_false(r):
                return l
            return Or(l, r)
        case Imp(l, r):
            l, r = _step(l), _step(r)
            if _is_false(l) or _is_true(r):
                return TRUE
            if _is_true(l):
                return r
            if _is_false(r):
                return Not(l)
            return Imp(l, r)
        case Iff(l, r):
            return Iff(_step(l), _step(r))
        case SepConj(l, r):
            l, r = _step(l), _step(r)
            if _is_false(l) or _is_false(r):
                return FALSE
            return SepConj(l, r)
        case SepImp(l, r):
            l, r = _step(l), _step(r)
            if _is_false(l) or _is_true(r):
                return TRUE
            return SepImp(l, r)
        case Forall(y, body) | Exists(y, body):
            body = _step(body)
            if y not in free_vars(body):
                return body
            return _tidy(type(p)(y, body))
        case Box(s, body):
            body = _step(body)
            # [upd x := e][clr x]p  ==>  [clr x]p
            if isinstance(s, HeapUpdate) and isinstance(body, Box) \
                    and body.stmt == HeapClear(s.var):
                return body
            return Box(s, body)
    return p


def simplify(p):
    """Sound cleanup: resugaring, propositional identities and the two
    heap-update/heap-clear interplay laws.  Output may contain sugar."""
    p = resugar(p)
    while True:
        q = _step(p)
        if q == p:
            return q
        p = q
