"""Heaps, stores, big-step execution and the satisfaction relation.

Everything is evaluated in a bounded model: quantifiers, allocation and the
heap extensions of ``-*`` range over the universe ``{0..B-1}``.  `sat` is the
direct, clause-by-clause reference implementation; the oracle module has a
faster bitset evaluator that is tested against it.
"""

from __future__ import annotations

import itertools
import json
import re
from dataclasses import dataclass
from typing import Iterator, Mapping

from .errors import (
    DSLSyntaxError, FuelExhaustedError, OutOfUniverse, UniverseExhausted,
)
from .syntax import (
    Add, Alloc, AllocMulti, AndB, Assign, Bool, Box, Dispose, Eq, FalseLit,
    Forall, GeneralMutate, HeapClear, HeapUpdate, If, Imp, IntLit, Lookup, Lt,
    Mul, Mutate, NotB, PointsWeak, SepConj, SepImp, Seq, Sub, TrueLit, Var,
    While, desugar, is_core,
)


class Heap(Mapping):
    """Immutable finite partial map from locations to values."""

    __slots__ = ("_cells", "_hash")

    def __init__(self, cells=()):
        self._cells = dict(cells)
        self._hash = None

    def __getitem__(self, n):
        return self._cells[n]

    def __contains__(self, n):
        return n in self._cells

    def __iter__(self):
        return iter(sorted(self._cells))

    def __len__(self):
        return len(self._cells)

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._cells.items()))
        return self._hash

    def __eq__(self, other):
        if isinstance(other, Heap):
            return self._cells == other._cells
        return NotImplemented

    @property
    def dom(self):
        return frozenset(self._cells)

    def store(self, n, v):
        """``h[n:=v]``; ``v=None`` clears the cell (``h[n:=⊥]``)."""
        cells = dict(self._cells)
        if v is None:
            cells.pop(n, None)
        else:
            cells[n] = v
        return Heap(cells)

    def restrict(self, locs):
        return Heap((n, self._cells[n]) for n in locs)

    def union(self, other):
        """Disjoint union ``h ⊎ h'``."""
        assert not (self.dom & other.dom)
        return Heap({**self._cells, **other._cells})

    def __repr__(self):
        return "heap{" + ", ".join(f"{n}:{self._cells[n]}" for n in self) + "}"


def heap_store(h, n, v):
    return h.store(n, v)


class Store(Mapping):
    """Total map from variables to integers; unlisted variables are 0."""

    __slots__ = ("_vals", "_hash")

    def __init__(self, bindings=()):
        self._vals = {k: v for k, v in dict(bindings).items() if v != 0}
        self._hash = None

    def __getitem__(self, x):
        return self._vals.get(x, 0)

    def __iter__(self):
        return iter(sorted(self._vals))

    def __len__(self):
        return len(self._vals)

    def __contains__(self, x):
        return True

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._vals.items()))
        return self._hash

    def __eq__(self, other):
        if isinstance(other, Store):
            return self._vals == other._vals
        return NotImplemented

    def set(self, x, v):
        vals = dict(self._vals)
        vals[x] = v
        return Store(vals)

    def explicit(self, names):
        return {x: self[x] for x in sorted(names)}

    def __repr__(self):
        return "store{" + ", ".join(f"{x}:{self._vals[x]}" for x in self) + "}"


@dataclass(frozen=True)
class Bounds:
    universe_size: int = 3
    fuel: int = 8

    def __post_init__(self):
        if self.universe_size < 1:
            raise ValueError("universe size must be at least 1")
        if self.fuel < 0:
            raise ValueError("fuel must be non-negative")

    @property
    def universe(self):
        return range(self.universe_size)


# ---------------------------------------------------------------------------
# Outcomes


@dataclass(frozen=True)
class State:
    heap: Heap
    store: Store


@dataclass(frozen=True)
class Fail:
    def __repr__(self):
        return "fail"


@dataclass(frozen=True)
class FuelExhausted:
    def __repr__(self):
        return "fuel-exhausted"


FAIL = Fail()
FUEL_EXHAUSTED = FuelExhausted()


# ---------------------------------------------------------------------------
# Expressions


def eval_expr(s, e):
    match e:
        case IntLit(v):
            return v
        case Var(name):
            return s[name]
        case Add(l, r):
            return eval_expr(s, l) + eval_expr(s, r)
        case Sub(l, r):
            return eval_expr(s, l) - eval_expr(s, r)
        case Mul(l, r):
            return eval_expr(s, l) * eval_expr(s, r)
    raise TypeError(f"not an expression: {e!r}")


def eval_bexpr(s, b):
    match b:
        case TrueLit():
            return True
        case FalseLit():
            return False
        case Eq(l, r):
            return eval_expr(s, l) == eval_expr(s, r)
        case Lt(l, r):
            return eval_expr(s, l) < eval_expr(s, r)
        case NotB(a):
            return not eval_bexpr(s, a)
        case AndB(l, r):
            return eval_bexpr(s, l) and eval_bexpr(s, r)
    raise TypeError(f"not a boolean expression: {b!r}")


# ---------------------------------------------------------------------------
# Execution


def _value(v, bounds, what):
    if not 0 <= v < bounds.universe_size:
        raise OutOfUniverse(f"{what} value {v} outside universe 0..{bounds.universe_size - 1}")
    return v


def check_state(h, s, bounds):
    """Reject stores whose values lie outside the universe.

    Heap contents are taken as given: a multi-cell allocation may place its
    tail beyond the last universe location, and fixtures may hold arbitrary
    values in cells the program never reads.
    """
    for x, v in s.items():
        _value(v, bounds, f"variable {x}")


def exec_stmt(stmt, h, s, bounds, strict=True):
    """All outcomes of running ``stmt`` from ``(h, s)``.

    With ``strict`` an allocation that finds no free location raises
    UniverseExhausted; otherwise that branch contributes no outcome, which
    matches the bounded reading of the allocation axiom's quantifier.
    """
    check_state(h, s, bounds)
    return frozenset(_exec(stmt, h, s, bounds, strict))


def _exec(stmt, h, s, bounds, strict):
    match stmt:
        case Assign(x, e):
            yield State(h, s.set(x, _value(eval_expr(s, e), bounds, "assigned")))
        case Lookup(x, e):
            n = eval_expr(s, e)
            if n in h:
                yield State(h, s.set(x, _value(h[n], bounds, "loaded")))
            else:
                yield FAIL
        case Mutate(x, e):
            if s[x] in h:
                yield State(h.store(s[x], _value(eval_expr(s, e), bounds, "stored")), s)
            else:
                yield FAIL
        case GeneralMutate(a, e):
            n = eval_expr(s, a)
            if n in h:
                yield State(h.store(n, _value(eval_expr(s, e), bounds, "stored")), s)
            else:
                yield FAIL
        case Alloc(x, e):
            v = _value(eval_expr(s, e), bounds, "stored")
            free = [n for n in bounds.universe if n not in h]
            if not free and strict:
                raise UniverseExhausted(f"no free location in universe of size {bounds.universe_size}")
            for n in free:
                yield State(h.store(n, v), s.set(x, n))
        case AllocMulti(x, es):
            vals = [_value(eval_expr(s, e), bounds, "stored") for e in es]
            found = False
            for m in bounds.universe:
                run = range(m, m + len(vals))
                if any(k in h for k in run):
                    continue
                found = True
                h2 = h
                for k, v in zip(run, vals):
                    h2 = h2.store(k, v)
                yield State(h2, s.set(x, m))
            if not found and strict:
                raise UniverseExhausted(f"no run of {len(vals)} free locations")
        case Dispose(x):
            if s[x] in h:
                yield State(h.store(s[x], None), s)
            else:
                yield FAIL
        case HeapUpdate(x, e):
            yield State(h.store(s[x], _value(eval_expr(s, e), bounds, "stored")), s)
        case HeapClear(x):
            yield State(h.store(s[x], None), s)
        case Seq(a, b):
            for o in _exec(a, h, s, bounds, strict):
                if isinstance(o, State):
                    yield from _exec(b, o.heap, o.store, bounds, strict)
                else:
                    yield o
        case If(c, a, b):
            yield from _exec(a if eval_bexpr(s, c) else b, h, s, bounds, strict)
        case While():
            yield from _exec_while(stmt, h, s, bounds, strict, bounds.fuel)
        case _:
            raise TypeError(f"not a statement: {stmt!r}")


def _exec_while(loop, h, s, bounds, strict, fuel):
    if not eval_bexpr(s, loop.cond):
        yield State(h, s)
        return
    if fuel == 0:
        yield FUEL_EXHAUSTED
        return
    for o in _exec(loop.body, h, s, bounds, strict):
        if isinstance(o, State):
            yield from _exec_while(loop, o.heap, o.store, bounds, strict, fuel - 1)
        else:
            yield o


# ---------------------------------------------------------------------------
# Satisfaction


def sat(h, s, p, bounds):
    """``h, s |= p`` in the bounded model (reference implementation)."""
    if not is_core(p):
        p = desugar(p)
    return _sat(h, s, p, bounds)


def box_holds(outcomes, post_holds):
    """``[S]q`` from the outcome set of S; refuses to guess when fuel ran out."""
    if FAIL in outcomes:
        return False
    inconclusive = False
    for o in outcomes:
        if isinstance(o, FuelExhausted):
            inconclusive = True
        elif not post_holds(o.heap, o.store):
            return False
    if inconclusive:
        raise FuelExhaustedError("loop fuel exhausted while evaluating a modality")
    return True


def _subheaps(h):
    locs = sorted(h.dom)
    for k in range(len(locs) + 1):
        for part in itertools.combinations(locs, k):
            yield h.restrict(part), h.restrict(set(locs) - set(part))


def extensions(h, bounds):
    """Every heap disjoint from ``h`` with locations and values in the universe."""
    free = [n for n in bounds.universe if n not in h]
    choices = [None, *bounds.universe]
    for vals in itertools.product(choices, repeat=len(free)):
        yield Heap((n, v) for n, v in zip(free, vals) if v is not None)


def _sat(h, s, p, bounds):
    match p:
        case Bool(b):
            return eval_bexpr(s, b)
        case PointsWeak(a, v):
            n = eval_expr(s, a)
            return n in h and h[n] == eval_expr(s, v)
        case Imp(l, r):
            return not _sat(h, s, l, bounds) or _sat(h, s, r, bounds)
        case Forall(x, body):
            return all(_sat(h, s.set(x, n), body, bounds) for n in bounds.universe)
        case SepConj(l, r):
            return any(_sat(h1, s, l, bounds) and _sat(h2, s, r, bounds)
                       for h1, h2 in _subheaps(h))
        case SepImp(l, r):
            return all(not _sat(h2, s, l, bounds) or _sat(h.union(h2), s, r, bounds)
                       for h2 in extensions(h, bounds))
        case Box(stmt, body):
            outcomes = exec_stmt(stmt, h, s, bounds, strict=False)
            return box_holds(outcomes, lambda h2, s2: _sat(h2, s2, body, bounds))
    raise TypeError(f"not a core assertion: {p!r}")


# ---------------------------------------------------------------------------
# Literal syntax for states: heap{1:2, 5:7}, store{x:1}


_STATE_RE = re.compile(r"^\s*(heap|store)\s*\{(.*)\}\s*$", re.S)


def _entries(body):
    body = body.strip()
    if not body:
        return []
    out = []
    for item in body.split(","):
        if ":" not in item:
            raise DSLSyntaxError(f"malformed entry {item.strip()!r}")
        k, v = item.split(":", 1)
        out.append((k.strip(), v.strip()))
    return out


def parse_heap(text):
    m = _STATE_RE.match(text)
    if not m or m.group(1) != "heap":
        raise DSLSyntaxError(f"expected heap{{...}} literal, got {text!r}")
    try:
        return Heap((int(k), int(v)) for k, v in _entries(m.group(2)))
    except ValueError as ex:
        raise DSLSyntaxError(f"bad heap literal: {ex}") from None


def parse_store(text):
    m = _STATE_RE.match(text)
    if not m or m.group(1) != "store":
        raise DSLSyntaxError(f"expected store{{...}} literal, got {text!r}")
    try:
        return Store((k, int(v)) for k, v in _entries(m.group(2)))
    except ValueError as ex:
        raise DSLSyntaxError(f"bad store literal: {ex}") from None


def state_to_json(h, s, names=None):
    store = s.explicit(names) if names is not None else dict(s.items())
    return {"heap": {str(n): h[n] for n in h}, "store": store}


def state_from_json(obj):
    if isinstance(obj, str):
        obj = json.loads(obj)
    h = Heap((int(k), int(v)) for k, v in obj.get("heap", {}).items())
    s = Store((k, int(v)) for k, v in obj.get("store", {}).items())
    return h, s


def iter_outcomes_sorted(outcomes) -> Iterator:
    """Deterministic order for printing outcome sets."""
    def key(o):
        if isinstance(o, State):
            return (0, sorted(o.heap.items()), sorted(o.store.items()))
        return (1 if isinstance(o, Fail) else 2, [], [])
    return iter(sorted(outcomes, key=key))
