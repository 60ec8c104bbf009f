"""Weakest preconditions, strongest postconditions and triple verification."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, Tuple

from .errors import MissingInvariant, NotBasic, SideConditionViolated
from .oracle import Evaluator, Inconclusive, Invalid, valid
from .rewrite import normalize
from .semantics import Bounds, Heap, Store
from .syntax import (
    Add, Alloc, AllocMulti, AndA, Assign, Bool, Box, Dispose, Eq, Exists,
    Forall, FreshNames, GeneralMutate, HeapClear, HeapUpdate, If, Imp, IntLit,
    Lookup, Mutate, Not, NotB, PointsStrong, PointsStrongAny, PointsWeak,
    PointsWeakAny, SepConj, SepImp, Seq, Var, While, expr_vars,
    free_vars, has_modality, subst, subst_expr,
)


@dataclass(frozen=True)
class Triple:
    pre: object
    prog: object
    post: object


@dataclass
class VCSet:
    items: List[Tuple[str, object]] = field(default_factory=list)

    def add(self, label, formula):
        self.items.append((label, formula))

    def extend(self, other):
        self.items.extend(other.items)

    def __iter__(self):
        return iter(self.items)

    def __len__(self):
        return len(self.items)


# ---------------------------------------------------------------------------
# Weakest preconditions


_PLAIN = (Assign, Lookup, Mutate, Alloc, Dispose, HeapUpdate, HeapClear)


def wp(stmt, q, fresh=None):
    """``(precondition, vcs)`` with every modality rewritten away."""
    if fresh is None:
        fresh = FreshNames.above(stmt, q)
    vcs = VCSet()
    counter = [0]
    modal = _wp(stmt, q, fresh, vcs, counter)
    pre, _ = normalize(modal, fresh=fresh)
    vcs.items = [(label, normalize(f, fresh=fresh)[0]) for label, f in vcs.items]
    return pre, vcs


def _wp(stmt, q, fresh, vcs, counter):
    """The precondition as a formula that may still contain modalities over
    basic and pseudo instructions."""
    match stmt:
        case _ if isinstance(stmt, _PLAIN):
            return Box(stmt, q)
        case GeneralMutate(addr, e):
            # (addr ~> -) /\ [z := addr][<z> := e]q with z fresh
            z = fresh()
            y = fresh()
            guard = Exists(y, PointsWeak(addr, Var(y)))
            return AndA(guard, Box(Assign(z, addr), Box(HeapUpdate(z, e), q)))
        case AllocMulti(x, es):
            return _wp_alloc_multi(x, es, q, fresh)
        case Seq(first, second):
            mid = _wp(second, q, fresh, vcs, counter)
            return _wp(first, mid, fresh, vcs, counter)
        case If(c, then, orelse):
            a = _wp(then, q, fresh, vcs, counter)
            b = _wp(orelse, q, fresh, vcs, counter)
            return AndA(Imp(Bool(c), a), Imp(Bool(NotB(c)), b))
        case While(c, inv, body):
            if inv is None:
                raise MissingInvariant("every loop needs an `invariant` annotation")
            counter[0] += 1
            tag = f"loop{counter[0]}"
            inner = _wp(body, inv, fresh, vcs, counter)
            vcs.add(f"{tag}.preserve", Imp(AndA(inv, Bool(c)), inner))
            vcs.add(f"{tag}.exit", Imp(AndA(inv, Bool(NotB(c))), q))
            return inv
    raise TypeError(f"not a statement: {stmt!r}")


def _wp_alloc_multi(x, es, q, fresh):
    if any(x in expr_vars(e) for e in es):
        y = fresh()
        es = tuple(subst_expr(e, x, Var(y)) for e in es)
        return Box(Assign(y, Var(x)), _wp_alloc_multi(x, es, q, fresh))
    cells = [Var(x) if i == 0 else Add(Var(x), IntLit(i)) for i in range(len(es))]
    body = q
    for cell, e in reversed(list(zip(cells, es))):
        z = fresh()
        body = Box(Assign(z, cell), Box(HeapUpdate(z, e), body))
    guard = None
    for cell in cells:
        y = fresh()
        free = Forall(y, Not(PointsWeak(cell, Var(y))))
        guard = free if guard is None else AndA(guard, free)
    return Forall(x, Imp(guard, body))


# ---------------------------------------------------------------------------
# Strongest postconditions


_BASIC = (Assign, Lookup, Mutate, Alloc, Dispose)


def _require_basic(stmt):
    if not isinstance(stmt, _BASIC):
        raise NotBasic(f"strongest postconditions are defined for basic instructions, "
                       f"not {type(stmt).__name__}")


def _points_any(e, fresh):
    y = fresh()
    return Exists(y, PointsWeak(e, Var(y)))


def sp(stmt, p, fresh=None):
    """``(required_pre, post)`` from the modal axioms, modalities normalized."""
    _require_basic(stmt)
    if has_modality(p):
        p, _ = normalize(p)
    if fresh is None:
        fresh = FreshNames.above(stmt, p)
    pre = p
    match stmt:
        case Assign(x, e):
            y = fresh()
            post = Exists(y, AndA(Box(Assign(x, Var(y)), p), Bool(Eq(Var(x), subst_expr(e, x, Var(y))))))
        case Lookup(x, e):
            pre = AndA(p, _points_any(e, fresh))
            y = fresh()
            # the new value of x is what the old address pointed to
            post = Exists(y, AndA(Box(Assign(x, Var(y)), p),
                                  PointsWeak(subst_expr(e, x, Var(y)), Var(x))))
        case Mutate(x, e):
            pre = AndA(p, _points_any(Var(x), fresh))
            y = fresh()
            post = AndA(Exists(y, Box(HeapUpdate(x, Var(y)), p)), PointsWeak(Var(x), e))
        case Alloc(x, e) if x not in expr_vars(e):
            y = fresh()
            post = AndA(Box(HeapClear(x), Exists(y, Box(Assign(x, Var(y)), p))),
                        PointsWeak(Var(x), e))
        case Alloc(x, e):
            # remember the old x in w so that e can still be evaluated
            w, y = fresh(), fresh()
            remembered = AndA(p, Bool(Eq(Var(w), Var(x))))
            post = Exists(w, AndA(
                Box(HeapClear(x), Exists(y, Box(Assign(x, Var(y)), remembered))),
                PointsWeak(Var(x), subst_expr(e, x, Var(w)))))
        case Dispose(x):
            pre = AndA(p, _points_any(Var(x), fresh))
            y = fresh()
            post = AndA(Exists(y, Box(HeapUpdate(x, Var(y)), p)),
                        Not(_points_any(Var(x), fresh)))
    post, _ = normalize(post, fresh=fresh)
    return pre, post


def global_side_condition(stmt, p):
    """None if the classical axiom applies, else the reason it does not."""
    match stmt:
        case Lookup(x, e) | Mutate(x, e) | Alloc(x, e) if x in expr_vars(e):
            return f"{x} occurs in {type(stmt).__name__.lower()} expression"
        case Lookup(x, _) | Alloc(x, _) if x in free_vars(p):
            return f"{x} occurs free in the precondition"
    return None


def sp_global(stmt, p, fresh=None):
    """``(required_pre, post)`` from the classical separation-logic axioms."""
    _require_basic(stmt)
    reason = global_side_condition(stmt, p)
    if reason is not None:
        raise SideConditionViolated(reason)
    if has_modality(p):
        p, _ = normalize(p)
    if fresh is None:
        fresh = FreshNames.above(stmt, p)
    match stmt:
        case Assign(x, e):
            y = fresh()
            return p, Exists(y, AndA(subst(p, x, Var(y)), Bool(Eq(Var(x), subst_expr(e, x, Var(y))))))
        case Lookup(x, e):
            cell = PointsStrong(e, Var(x))
            return (AndA(p, PointsWeakAny(e)),
                    SepConj(cell, Not(SepImp(cell, Not(p)))))
        case Mutate(x, e):
            return (AndA(p, PointsWeakAny(Var(x))),
                    SepConj(PointsStrong(Var(x), e), Not(SepImp(PointsStrongAny(Var(x)), Not(p)))))
        case Alloc(x, e):
            return p, SepConj(PointsStrong(Var(x), e), p)
        case Dispose(x):
            return (AndA(p, PointsWeakAny(Var(x))),
                    Not(SepImp(PointsStrongAny(Var(x)), Not(p))))


# ---------------------------------------------------------------------------
# Verification


@dataclass(frozen=True)
class Verified:
    vcs: int = 0

    def __str__(self):
        return "Verified"


@dataclass(frozen=True)
class Refuted:
    label: str
    heap: Heap
    store: Store
    names: tuple = ()

    def to_json(self):
        return Invalid(self.heap, self.store, self.names, self.label).to_json()

    def __str__(self):
        where = str(Invalid(self.heap, self.store, self.names)).removeprefix("Invalid: counterexample ")
        return f"Refuted: {self.label} fails at {where}"


@dataclass
class Report:
    """Per-condition verdicts behind a verification result."""
    verdict: object
    checks: list


def verification_conditions(t, fresh=None):
    """The labeled implications whose validity establishes ``t``."""
    if fresh is None:
        fresh = FreshNames.above(t.pre, t.prog, t.post)
    pre, vcs = wp(t.prog, t.post, fresh)
    out = VCSet([("pre", Imp(t.pre, pre))])
    out.extend(vcs)
    return out


def verify_triple(t, bounds=Bounds(), report=False):
    """Discharge every verification condition of ``t`` in the bounded model."""
    ev = Evaluator(bounds)
    checks = []
    verdict = None
    inconclusive = None
    for label, formula in verification_conditions(t):
        v = valid(formula, bounds, label=label, evaluator=ev)
        checks.append((label, v))
        if isinstance(v, Invalid) and verdict is None:
            verdict = Refuted(label, v.heap, v.store, v.names)
        elif isinstance(v, Inconclusive) and inconclusive is None:
            inconclusive = v
    if verdict is None:
        verdict = inconclusive or Verified(len(checks))
    return Report(verdict, checks) if report else verdict
