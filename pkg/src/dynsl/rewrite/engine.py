"""Strategies, normalization and the termination measure."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import List, Tuple

from ..errors import StepLimitExceeded, UnsupportedModality
from ..syntax import (
    Alloc, Assign, Box, Forall, FreshNames, HeapClear, HeapUpdate, Imp,
    SepConj, SepImp, Var, desugar, expr_vars, show, subst_expr,
)
from .rules import SUPPORTED, Rule, contract

INNERMOST = "innermost"
OUTERMOST = "outermost"
STRATEGIES = (INNERMOST, OUTERMOST)
DEFAULT_STEP_LIMIT = 10 ** 6


@dataclass(frozen=True)
class Step:
    rule: Rule
    path: Tuple[int, ...]
    formula: object

    def describe(self):
        where = ".".join(map(str, self.path)) or "root"
        return f"{self.rule} @ path {where}: {show(self.formula)}"

    def to_json(self):
        return {"rule": str(self.rule), "path": list(self.path), "formula": show(self.formula)}


Trace = List[Step]


def _children(p):
    match p:
        case Imp(l, r) | SepConj(l, r) | SepImp(l, r):
            return (l, r)
        case Forall(_, body) | Box(_, body):
            return (body,)
    return ()


def _with_child(p, i, child):
    match p:
        case Imp(l, r) | SepConj(l, r) | SepImp(l, r):
            return type(p)(child, r) if i == 0 else type(p)(l, child)
        case Forall(x, _):
            return Forall(x, child)
        case Box(s, _):
            return Box(s, child)
    raise IndexError(i)


def prepare(p, fresh):
    """Desugar and bring every modality into the shape the rules accept.

    An allocation ``x := cons(e)`` whose expression reads ``x`` is replaced by
    ``y := x; x := cons(e[y/x])`` for a fresh ``y``.  Modalities over
    statements without rewrite rules raise UnsupportedModality.
    """
    p = desugar(p, fresh)

    def go(q):
        match q:
            case Imp(l, r) | SepConj(l, r) | SepImp(l, r):
                return type(q)(go(l), go(r))
            case Forall(x, body):
                return Forall(x, go(body))
            case Box(s, body):
                body = go(body)
                if not isinstance(s, SUPPORTED):
                    raise UnsupportedModality(
                        f"no rewrite rules for {type(s).__name__}; use vc.wp for compound programs")
                if isinstance(s, Alloc) and s.var in expr_vars(s.expr):
                    y = fresh()
                    inner = Box(Alloc(s.var, subst_expr(s.expr, s.var, Var(y))), body)
                    return Box(Assign(y, Var(s.var)), inner)
                return Box(s, body)
        return q

    return go(p)


def _find(p, strategy, fresh, path):
    if strategy == OUTERMOST:
        hit = contract(p, fresh)
        if hit is not None:
            return hit[0], hit[1], path
    for i, child in enumerate(_children(p)):
        found = _find(child, strategy, fresh, path + (i,))
        if found is not None:
            new_child, rule, where = found
            return _with_child(p, i, new_child), rule, where
    if strategy == INNERMOST:
        hit = contract(p, fresh)
        if hit is not None:
            return hit[0], hit[1], path
    return None


def rewrite_step(p, strategy=INNERMOST, fresh=None):
    """Contract the leftmost-innermost (or -outermost) redex of ``p``.

    Returns ``(formula, rule, path)`` or None when ``p`` is in normal form.
    ``p`` must be core and prepared (see `prepare`).
    """
    if strategy not in STRATEGIES:
        raise ValueError(f"unknown strategy {strategy!r}")
    if fresh is None:
        fresh = FreshNames.above(p)
    return _find(p, strategy, fresh, ())


def normalize(p, strategy=INNERMOST, fresh=None, max_steps=DEFAULT_STEP_LIMIT):
    """Rewrite ``p`` to a modality-free formula; returns ``(formula, trace)``."""
    if strategy not in STRATEGIES:
        raise ValueError(f"unknown strategy {strategy!r}")
    if fresh is None:
        fresh = FreshNames.above(p)
    p = prepare(p, fresh)
    if strategy == INNERMOST:
        return _Innermost(fresh, max_steps).run(p)
    trace = []
    while True:
        found = rewrite_step(p, strategy, fresh)
        if found is None:
            return p, trace
        p, rule, path = found
        trace.append(Step(rule, path, p))
        if len(trace) >= max_steps:
            raise StepLimitExceeded(f"no normal form within {max_steps} steps")


class _Innermost:
    """Leftmost-innermost normalization in one recursive pass.

    Everything to the left of the current position is already normal and a
    contraction only creates redexes inside its own result, so normalizing
    children left to right and re-normalizing each contractum performs the
    same step sequence as repeated `rewrite_step` calls, without rescanning
    the whole formula for every step.
    """

    def __init__(self, fresh, max_steps):
        self.fresh = fresh
        self.max_steps = max_steps
        self.trace = []
        self.frames = []  # (parent, child index) from the root down

    def run(self, p):
        return self.norm(p, ()), self.trace

    def norm(self, p, path):
        kids = _children(p)
        for i, child in enumerate(kids):
            self.frames.append((p, i))
            new = self.norm(child, path + (i,))
            self.frames.pop()
            if new is not child:
                p = _with_child(p, i, new)
        hit = contract(p, self.fresh)
        if hit is None:
            return p
        result, rule = hit
        self.trace.append(Step(rule, path, self._plug(result)))
        if len(self.trace) >= self.max_steps:
            raise StepLimitExceeded(f"no normal form within {self.max_steps} steps")
        return self.norm(result, path)

    def _plug(self, p):
        # each frame's parent already holds its normalized left siblings
        for parent, i in reversed(self.frames):
            p = _with_child(parent, i, p)
        return p


# ---------------------------------------------------------------------------
# Termination: the multiset path order over formulas abstracted to terms.
# Atoms collapse to one constant, quantifiers forget their variable, and
# modalities are ordered by the instruction they carry.  Every rule maps a
# redex to something smaller and the order is closed under contexts, so each
# rewrite step strictly descends.

_ATOM, _CONNECTIVE, _ASSIGN, _UPDATE, _CLEAR, _BASIC = range(6)


def _symbol(p):
    match p:
        case Box(s, _):
            kind = {Assign: _ASSIGN, HeapUpdate: _UPDATE, HeapClear: _CLEAR}.get(type(s), _BASIC)
            return kind, f"box{kind}"
        case Imp() | SepConj() | SepImp() | Forall():
            return _CONNECTIVE, type(p).__name__
    return _ATOM, "atom"


class PathOrder:
    """Multiset path order on prepared core formulas.

    Subterms are interned, with argument lists sorted, so terms equal up to
    argument permutation share an id and comparisons are memoized per pair.
    """

    def __init__(self):
        self._ids = {}
        self._nodes = []
        self._memo = {}

    def term(self, p):
        kids = tuple(sorted(self.term(c) for c in _children(p)))
        level, name = _symbol(p)
        key = (name, kids)
        got = self._ids.get(key)
        if got is None:
            got = len(self._nodes)
            self._ids[key] = got
            self._nodes.append((level, name, kids))
        return got

    def greater(self, p, q):
        """True iff ``p`` is strictly above ``q``."""
        return self._gt(self.term(p), self.term(q))

    def _gt(self, s, t):
        if s == t:
            return False
        key = (s, t)
        got = self._memo.get(key)
        if got is None:
            got = self._compare(s, t)
            self._memo[key] = got
        return got

    def _compare(self, s, t):
        f_level, f, ss = self._nodes[s]
        g_level, g, ts = self._nodes[t]
        if any(a == t or self._gt(a, t) for a in ss):
            return True
        if f_level > g_level:
            return all(self._gt(s, b) for b in ts)
        if f == g:
            left, right = Counter(ss), Counter(ts)
            more, fewer = left - right, right - left
            return bool(more) and all(any(self._gt(a, b) for a in more) for b in fewer)
        return False
