"""Seeded random assertions, statements and programs for property suites.

Everything generated is arithmetic-free: expressions are variables or
constants inside the universe, so bounded semantics never needs a value
outside ``{0..B-1}``.
"""

from __future__ import annotations

import random

from .syntax import (
    Alloc, AllocMulti, AndA, AndB, Assign, Bool, Box, Dispose, Emp, Eq,
    Exists, FalseLit, Forall, GeneralMutate, HeapClear, HeapUpdate, If, Imp,
    IntLit, Lookup, Lt, Mutate, Not, NotB, Or, PointsStrong, PointsStrongAny,
    PointsWeak, PointsWeakAny, SepConj, SepImp, Seq, TrueLit, Var,
)

VARS = ("x", "y", "z")
BASIC_KINDS = ("assign", "lookup", "mutate", "cons", "dispose", "upd", "clr")


class Generator:
    def __init__(self, seed=0, names=VARS, constants=3, modal_rate=0.1):
        self.rng = random.Random(seed)
        self.names = tuple(names)
        self.constants = constants
        self.modal_rate = modal_rate

    # expressions -----------------------------------------------------------

    def expr(self):
        if self.rng.random() < 0.6:
            return Var(self.rng.choice(self.names))
        return IntLit(self.rng.randrange(self.constants))

    def var(self):
        return self.rng.choice(self.names)

    def bexpr(self, depth=1):
        r = self.rng.random()
        if depth > 0 and r < 0.15:
            return NotB(Eq(self.expr(), self.expr()))
        if depth > 0 and r < 0.25:
            return AndB(self.bexpr(0), self.bexpr(0))
        if r < 0.35:
            return self.rng.choice((TrueLit(), FalseLit()))
        if r < 0.45:
            return Lt(self.expr(), self.expr())
        return Eq(self.expr(), self.expr())

    # assertions ------------------------------------------------------------

    def atom(self):
        r = self.rng.random()
        if r < 0.3:
            return PointsWeak(self.expr(), self.expr())
        if r < 0.45:
            return PointsWeakAny(self.expr())
        if r < 0.55:
            return PointsStrong(self.expr(), self.expr())
        if r < 0.6:
            return PointsStrongAny(self.expr())
        if r < 0.68:
            return Emp()
        return Bool(self.bexpr())

    def assertion(self, depth=3):
        if depth == 0 or self.rng.random() < 0.25:
            return self.atom()
        d = depth - 1
        r = self.rng.random()
        if r < self.modal_rate:
            return Box(self.basic(), self.assertion(d))
        kinds = ("imp", "and", "or", "not", "star", "wand", "forall", "exists")
        k = self.rng.choice(kinds)
        if k == "imp":
            return Imp(self.assertion(d), self.assertion(d))
        if k == "and":
            return AndA(self.assertion(d), self.assertion(d))
        if k == "or":
            return Or(self.assertion(d), self.assertion(d))
        if k == "not":
            inner = self.assertion(d)
            # `!b` on a boolean parses back as a boolean negation
            return Bool(NotB(inner.cond)) if isinstance(inner, Bool) else Not(inner)
        if k == "star":
            return SepConj(self.assertion(d), self.assertion(d))
        if k == "wand":
            return SepImp(self.assertion(d), self.assertion(d))
        q = Forall if k == "forall" else Exists
        return q(self.var(), self.assertion(d))

    def first_order(self, depth=3):
        """An assertion without modalities."""
        saved, self.modal_rate = self.modal_rate, 0.0
        try:
            return self.assertion(depth)
        finally:
            self.modal_rate = saved

    # statements ------------------------------------------------------------

    def basic(self, kind=None):
        kind = kind or self.rng.choice(BASIC_KINDS)
        x = self.var()
        if kind == "assign":
            return Assign(x, self.expr())
        if kind == "lookup":
            return Lookup(x, self.expr())
        if kind == "mutate":
            return Mutate(x, self.expr())
        if kind == "cons":
            return Alloc(x, self.expr())
        if kind == "dispose":
            return Dispose(x)
        if kind == "upd":
            return HeapUpdate(x, self.expr())
        if kind == "clr":
            return HeapClear(x)
        raise ValueError(f"unknown statement kind {kind!r}")

    def simple(self):
        """A loop-free non-sequential statement, including the extensions."""
        r = self.rng.random()
        if r < 0.1:
            # a variable address would read back as the simple mutation form
            return GeneralMutate(IntLit(self.rng.randrange(self.constants)), self.expr())
        if r < 0.2:
            n = self.rng.randint(2, 3)
            return AllocMulti(self.var(), tuple(self.expr() for _ in range(n)))
        if r < 0.3:
            return If(self.bexpr(), self.basic(self._real_kind()), self.basic(self._real_kind()))
        return self.basic(self._real_kind())

    def _real_kind(self):
        return self.rng.choice(BASIC_KINDS[:5])

    def program(self, length=3, multi_alloc_limit=1):
        """A loop-free program of 1..length simple statements.

        Each multi-cell allocation multiplies the size of a precondition over
        `*` several times, so at most ``multi_alloc_limit`` are drawn.
        """
        parts = []
        budget = multi_alloc_limit
        for _ in range(self.rng.randint(1, length)):
            s = self.simple()
            while isinstance(s, AllocMulti) and budget == 0:
                s = self.simple()
            budget -= isinstance(s, AllocMulti)
            parts.append(s)
        prog = parts[-1]
        for s in reversed(parts[:-1]):
            prog = Seq(s, prog)
        return prog
