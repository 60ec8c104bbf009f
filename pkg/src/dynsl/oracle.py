"""Bounded-model decision procedures: validity, equivalence, triple validity.

The evaluator computes the denotation of a formula under a fixed store as a
pair of boolean vectors over all universe heaps: the heaps where it is
definitely true and those where it is definitely false.  A heap in neither
set is one where a loop ran out of fuel.  `*` and `-*` are evaluated over a
precomputed table of every disjoint pair of heaps, so each node costs a few
vectorized operations instead of a per-heap enumeration.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .errors import FuelExhaustedError
from .semantics import (
    FAIL, Bounds, FuelExhausted, Heap, State, Store, eval_bexpr, eval_expr,
    exec_stmt, sat, state_to_json,
)
from .syntax import (
    Bool, Box, Forall, FreshNames, Iff, Imp, PointsWeak, SepConj, SepImp,
    desugar, free_vars, is_core, stmt_vars,
)


# ---------------------------------------------------------------------------
# Verdicts


@dataclass(frozen=True)
class Valid:
    def __str__(self):
        return "Valid"


@dataclass(frozen=True)
class Invalid:
    heap: Heap
    store: Store
    names: tuple = ()
    label: str = ""

    def to_json(self):
        out = state_to_json(self.heap, self.store, self.names)
        out["vc"] = self.label
        return out

    def __str__(self):
        shown = Store(self.store.explicit(self.names)) if self.names else self.store
        parts = [f"Invalid: counterexample {self.heap!r} {_show_store(shown, self.names)}"]
        if self.label:
            parts.append(f"(vc {self.label})")
        return " ".join(parts)


@dataclass(frozen=True)
class Inconclusive:
    reason: str = "loop fuel exhausted"

    def __str__(self):
        return f"Inconclusive: {self.reason}"


def _show_store(s, names):
    names = sorted(names) if names else sorted(s)
    return "store{" + ", ".join(f"{x}:{s[x]}" for x in names) + "}"


# ---------------------------------------------------------------------------
# Model space


def _domain_key(h):
    return (sum(1 << n for n in h), tuple(h[n] for n in sorted(h)))


class ModelSpace:
    """All heaps over the universe, indexed in enumeration order."""

    def __init__(self, bounds):
        self.bounds = bounds
        universe = list(bounds.universe)
        heaps = []
        for cells in itertools.product([None, *universe], repeat=len(universe)):
            heaps.append(Heap((n, v) for n, v in zip(universe, cells) if v is not None))
        heaps.sort(key=_domain_key)
        self.heaps = heaps
        self.index = {h: i for i, h in enumerate(heaps)}
        self.size = len(heaps)

        self.points = {}
        for n in universe:
            for v in universe:
                vec = np.zeros(self.size, dtype=bool)
                for i, h in enumerate(heaps):
                    if h.get(n) == v:
                        vec[i] = True
                self.points[(n, v)] = vec
        self.nowhere = np.zeros(self.size, dtype=bool)

        # every (h1, h2, h1 + h2) with disjoint domains
        a, b, u = [], [], []
        for i, h1 in enumerate(heaps):
            for j, h2 in enumerate(heaps):
                if not (h1.dom & h2.dom):
                    a.append(i)
                    b.append(j)
                    u.append(self.index[h1.union(h2)])
        self.left = np.array(a, dtype=np.intp)
        self.right = np.array(b, dtype=np.intp)
        self.whole = np.array(u, dtype=np.intp)

    def stores(self, names):
        for vals in itertools.product(self.bounds.universe, repeat=len(names)):
            yield dict(zip(names, vals))


_SPACES = {}


def model_space(bounds):
    key = bounds.universe_size
    if key not in _SPACES:
        _SPACES[key] = ModelSpace(bounds)
    return _SPACES[key]


def enumerate_models(names, bounds):
    """Every (heap, store) over the universe: heap-major, stores lexicographic."""
    names = sorted(names)
    space = model_space(bounds)
    for h in space.heaps:
        for env in space.stores(names):
            yield h, Store(env)


def model_count(names, bounds):
    b = bounds.universe_size
    return (b + 1) ** b * b ** len(set(names))


# ---------------------------------------------------------------------------
# Evaluator


class Evaluator:
    """Memoizing denotation engine for core assertions over one model space."""

    def __init__(self, bounds):
        self.bounds = bounds
        self.space = model_space(bounds)
        self._keep = []
        self._fv = {}
        self._memo = {}
        self._trans = {}

    def _free(self, p):
        key = id(p)
        got = self._fv.get(key)
        if got is None:
            self._keep.append(p)
            got = tuple(sorted(free_vars(p)))
            self._fv[key] = got
        return got

    def den(self, p, env):
        """``(true_heaps, false_heaps)`` of core ``p`` under store ``env``."""
        names = self._free(p)
        key = (id(p), tuple(env.get(x, 0) for x in names))
        got = self._memo.get(key)
        if got is None:
            got = self._den(p, env)
            self._memo[key] = got
        return got

    def _den(self, p, env):
        sp = self.space
        s = _EnvStore(env)
        match p:
            case Bool(b):
                t = np.full(sp.size, eval_bexpr(s, b))
                return t, ~t
            case PointsWeak(a, v):
                t = sp.points.get((eval_expr(s, a), eval_expr(s, v)), sp.nowhere)
                return t, ~t
            case Imp(l, r):
                lt, lf = self.den(l, env)
                rt, rf = self.den(r, env)
                return lf | rt, lt & rf
            case Forall(x, body):
                t = np.ones(sp.size, dtype=bool)
                f = np.zeros(sp.size, dtype=bool)
                for n in self.bounds.universe:
                    bt, bf = self.den(body, {**env, x: n})
                    t &= bt
                    f |= bf
                return t, f
            case SepConj(l, r):
                lt, lf = self.den(l, env)
                rt, rf = self.den(r, env)
                t = np.zeros(sp.size, dtype=bool)
                t[sp.whole[lt[sp.left] & rt[sp.right]]] = True
                maybe = np.zeros(sp.size, dtype=bool)
                maybe[sp.whole[~lf[sp.left] & ~rf[sp.right]]] = True
                return t, ~maybe
            case SepImp(l, r):
                # h |= l -* r: every extension h2 with h2 |= l has h + h2 |= r
                lt, lf = self.den(l, env)
                rt, rf = self.den(r, env)
                f = np.zeros(sp.size, dtype=bool)
                f[sp.left[lt[sp.right] & rf[sp.whole]]] = True
                open_ = np.zeros(sp.size, dtype=bool)
                open_[sp.left[~lf[sp.right] & ~rt[sp.whole]]] = True
                return ~open_, f
            case Box(stmt, body):
                return self._box(stmt, body, env)
        raise TypeError(f"not a core assertion: {p!r}")

    def transitions(self, stmt, env):
        """Per heap index: list of outcomes, with states as (heap, store delta)."""
        names = tuple(sorted(stmt_vars(stmt)))
        key = (id(stmt), tuple(env.get(x, 0) for x in names))
        got = self._trans.get(key)
        if got is not None:
            return got
        self._keep.append(stmt)
        local = Store({x: env.get(x, 0) for x in names})
        got = []
        for h in self.space.heaps:
            outs = []
            for o in exec_stmt(stmt, h, local, self.bounds, strict=False):
                if isinstance(o, State):
                    delta = {x: o.store[x] for x in names}
                    outs.append((o.heap, delta))
                else:
                    outs.append(o)
            got.append(outs)
        self._trans[key] = got
        return got

    def _box(self, stmt, body, env):
        sp = self.space
        t = np.ones(sp.size, dtype=bool)
        f = np.zeros(sp.size, dtype=bool)
        for i, outs in enumerate(self.transitions(stmt, env)):
            unknown = False
            for o in outs:
                if o is FAIL:
                    verdict = False
                elif isinstance(o, FuelExhausted):
                    verdict = None
                else:
                    verdict = self.holds_at(o[0], {**env, **o[1]}, body)
                if verdict is False:
                    t[i] = False
                    f[i] = True
                    break
                if verdict is None:
                    unknown = True
            else:
                if unknown:
                    t[i] = False
        return t, f

    def holds_at(self, h, env, p):
        """True, False or None (inconclusive) for one heap, which may lie
        outside the universe (multi-cell allocation can produce such heaps)."""
        i = self.space.index.get(h)
        if i is not None:
            t, f = self.den(p, env)
            return True if t[i] else False if f[i] else None
        try:
            return sat(h, Store(env), p, self.bounds)
        except FuelExhaustedError:
            return None


class _EnvStore(dict):
    """A plain dict read with the store's default of 0."""

    def __missing__(self, key):
        return 0


def _core(p):
    if is_core(p):
        return p
    return desugar(p, FreshNames.above(p))


def _first_failure(space, names, per_store):
    """Scan stores; return the enumeration-first (heap index, store, unknown?)."""
    best = None
    unknown = False
    for env in space.stores(names):
        bad, open_ = per_store(env)
        if open_.any():
            unknown = True
        hits = np.flatnonzero(bad)
        if hits.size and (best is None or hits[0] < best[0]):
            best = (int(hits[0]), env)
    return best, unknown


def holds(h, s, p, bounds, evaluator=None):
    """``h, s |= p`` through the evaluator; raises on fuel exhaustion."""
    ev = evaluator or Evaluator(bounds)
    got = ev.holds_at(h, dict(s.items()), _core(p))
    if got is None:
        raise FuelExhaustedError("loop fuel exhausted while evaluating a modality")
    return got


def valid(p, bounds=Bounds(), names=(), label="", evaluator=None):
    """Bounded validity; Invalid carries the enumeration-first counterexample."""
    core = _core(p)
    ev = evaluator or Evaluator(bounds)
    names = tuple(sorted(set(free_vars(core)) | set(names)))

    def per_store(env):
        t, f = ev.den(core, env)
        return f, ~(t | f)

    best, unknown = _first_failure(ev.space, names, per_store)
    if best is not None:
        return Invalid(ev.space.heaps[best[0]], Store(best[1]), names, label)
    if unknown:
        return Inconclusive()
    return Valid()


def equiv(p, q, bounds=Bounds(), evaluator=None):
    return valid(Iff(p, q), bounds, evaluator=evaluator)


def triple_valid(t, bounds=Bounds(), evaluator=None):
    """Strong partial correctness of ``{t.pre} t.prog {t.post}`` directly by
    execution; independent of any precondition calculus."""
    ev = evaluator or Evaluator(bounds)
    pre, post = _core(t.pre), _core(t.post)
    names = tuple(sorted(set(free_vars(pre)) | set(free_vars(post)) | stmt_vars(t.prog)))

    def per_store(env):
        pt, pf = ev.den(pre, env)
        bad = np.zeros(ev.space.size, dtype=bool)
        open_ = ~(pt | pf)
        for i, outs in enumerate(ev.transitions(t.prog, env)):
            if not pt[i]:
                continue
            for o in outs:
                if o is FAIL:
                    verdict = False
                elif isinstance(o, FuelExhausted):
                    verdict = None
                else:
                    verdict = ev.holds_at(o[0], {**env, **o[1]}, post)
                if verdict is False:
                    bad[i] = True
                    break
                if verdict is None:
                    open_[i] = True
        return bad, open_ & ~bad

    best, unknown = _first_failure(ev.space, names, per_store)
    if best is not None:
        return Invalid(ev.space.heaps[best[0]], Store(best[1]), names, "triple")
    if unknown:
        return Inconclusive()
    return Valid()

