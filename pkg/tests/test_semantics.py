import json

import pytest

from dynsl.errors import FuelExhaustedError, OutOfUniverse, UniverseExhausted
from dynsl.generate import Generator
from dynsl.semantics import (
    FAIL, FUEL_EXHAUSTED, Bounds, Heap, State, Store, eval_bexpr, eval_expr,
    exec_stmt, extensions, heap_store, parse_heap, parse_store, sat,
    state_from_json, state_to_json, _subheaps,
)
from dynsl.syntax import (
    AllocMulti, Eq, HeapClear, HeapUpdate, IntLit,
    Var, parse_expr,
)

from helpers import A, B3, S

B8 = Bounds(8)


class TestEval:
    def test_examples(self):
        assert eval_expr(Store({"x": 2}), parse_expr("x + 1")) == 3
        assert eval_bexpr(Store(), Eq(IntLit(0), IntLit(0)))
        assert eval_bexpr(Store({"x": 1, "y": 1}), Eq(Var("x"), Var("y")))

    def test_store_defaults_to_zero(self):
        s = Store({"x": 4})
        assert s["nothing"] == 0
        assert Store({"x": 0}) == Store()

    def test_arithmetic(self):
        assert eval_expr(Store({"x": 3, "y": 2}), parse_expr("x * y - 1")) == 5


class TestHeap:
    def test_store_and_clear(self):
        assert heap_store(Heap(), 5, 7) == Heap({5: 7})
        assert heap_store(Heap({5: 7}), 5, None) == Heap()
        assert heap_store(Heap({5: 7}), 5, 9) == Heap({5: 9})

    def test_domains(self):
        h = Heap({1: 2})
        assert heap_store(h, 3, 0).dom == {1, 3}
        assert heap_store(h, 1, None).dom == frozenset()
        assert heap_store(h, 4, None) == h

    def test_immutable(self):
        h = Heap({1: 2})
        h.store(1, 3)
        assert h == Heap({1: 2})

    def test_partitions(self):
        h = Heap({0: 1, 1: 2, 2: 0})
        splits = list(_subheaps(h))
        assert len(splits) == 8
        for h1, h2 in splits:
            assert not (h1.dom & h2.dom)
            assert h1.union(h2) == h

    def test_extensions(self):
        exts = list(extensions(Heap({0: 0}), B3))
        assert len(exts) == 16  # two free cells, each absent or one of 3 values
        assert all(0 not in h2 for h2 in exts)


class TestExec:
    def test_lookup_fails_on_dangling(self):
        assert exec_stmt(S("x := [e]"), Heap(), Store({"e": 1}), B3) == {FAIL}

    def test_dispose(self):
        out = exec_stmt(S("dispose(x)"), Heap({5: 7}), Store({"x": 5}), B8)
        assert out == {State(Heap(), Store({"x": 5}))}

    def test_cons_single_fresh_location(self):
        out = exec_stmt(S("x := cons(0)"), Heap({0: 9}), Store(), Bounds(2))
        assert out == {State(Heap({0: 9, 1: 0}), Store({"x": 1}))}

    def test_cons_enumerates_free_locations(self):
        out = exec_stmt(S("x := cons(2)"), Heap({1: 1}), Store(), B3)
        assert {o.store["x"] for o in out} == {0, 2}

    def test_failing_rules(self):
        h, s = Heap({1: 0}), Store({"x": 2, "e": 2})
        for text in ("x := [e]", "[x] := 0", "dispose(x)", "[x + 0] := 1"):
            assert exec_stmt(S(text), h, s, B3) == {FAIL}, text
        ok = Store({"x": 1, "e": 1})
        for text in ("x := [e]", "[x] := 0", "dispose(x)", "[x + 0] := 1"):
            assert FAIL not in exec_stmt(S(text), h, ok, B3), text

    def test_pseudo_instructions_never_fail(self):
        for h in (Heap(), Heap({0: 1}), Heap({1: 1, 2: 2})):
            for v in range(3):
                s = Store({"x": v})
                up = exec_stmt(HeapUpdate("x", IntLit(2)), h, s, B3)
                clr = exec_stmt(HeapClear("x"), h, s, B3)
                assert up == {State(h.store(v, 2), s)}
                assert clr == {State(h.store(v, None), s)}

    def test_deterministic_without_allocation(self):
        g = Generator(3)
        for _ in range(60):
            stmt = g.basic(g.rng.choice(["assign", "lookup", "mutate", "dispose", "upd", "clr"]))
            for h in (Heap(), Heap({0: 0, 1: 2}), Heap({0: 1, 1: 1, 2: 1})):
                assert len(exec_stmt(stmt, h, Store({"x": 1, "y": 0, "z": 2}), B3)) == 1

    def test_multi_cell_allocation(self):
        out = exec_stmt(AllocMulti("x", (IntLit(1), IntLit(2))), Heap({1: 0}), Store(), B3)
        starts = {o.store["x"]: o.heap for o in out}
        assert set(starts) == {2}
        assert starts[2] == Heap({1: 0, 2: 1, 3: 2})

    def test_multi_cell_allocation_runs(self):
        out = exec_stmt(AllocMulti("x", (IntLit(0), IntLit(0))), Heap(), Store(), B3)
        assert sorted(o.store["x"] for o in out) == [0, 1, 2]

    def test_universe_exhausted_is_an_error(self):
        full = Heap({0: 0, 1: 0, 2: 0})
        with pytest.raises(UniverseExhausted):
            exec_stmt(S("x := cons(0)"), full, Store(), B3)
        assert exec_stmt(S("x := cons(0)"), full, Store(), B3, strict=False) == frozenset()

    def test_out_of_universe(self):
        with pytest.raises(OutOfUniverse):
            exec_stmt(S("x := 3"), Heap(), Store(), B3)
        with pytest.raises(OutOfUniverse):
            exec_stmt(S("[x] := x + 5"), Heap({0: 0}), Store(), B3)
        with pytest.raises(OutOfUniverse):
            exec_stmt(S("x := 0"), Heap(), Store({"y": 7}), B3)

    def test_while_and_fuel(self):
        loop = S("while x < 2 do x := x + 1 od")
        assert exec_stmt(loop, Heap(), Store(), Bounds(3, fuel=5)) == {State(Heap(), Store({"x": 2}))}
        assert exec_stmt(loop, Heap(), Store(), Bounds(3, fuel=1)) == {FUEL_EXHAUSTED}
        spin = S("while true do x := x od")
        assert exec_stmt(spin, Heap(), Store(), B3) == {FUEL_EXHAUSTED}

    def test_if_and_seq(self):
        prog = S("if x = 0 then y := 1 else y := 2 fi; [y] := 0")
        out = exec_stmt(prog, Heap({1: 1}), Store(), B3)
        assert out == {State(Heap({1: 0}), Store({"y": 1}))}
        assert exec_stmt(prog, Heap({1: 1}), Store({"x": 1}), B3) == {FAIL}


class TestSat:
    def test_examples(self):
        assert sat(Heap(), Store(), A("emp"), B3)
        assert sat(Heap({1: 2}), Store({"x": 1}), A("x ~> 2"), B3)
        assert sat(Heap(), Store(), A("(1 |-> 0) -* (1 ~> 0)"), B3)

    def test_emp_and_strong_points_to(self):
        assert not sat(Heap({0: 0}), Store(), A("emp"), B3)
        assert sat(Heap({1: 2}), Store({"x": 1}), A("x |-> 2"), B3)
        assert not sat(Heap({1: 2, 0: 0}), Store({"x": 1}), A("x |-> 2"), B3)
        assert sat(Heap({1: 2, 0: 0}), Store({"x": 1}), A("x |-> 2 * 0 |-> 0"), B3)

    def test_wand(self):
        assert sat(Heap(), Store(), A("(y ~> 1) -* (y ~> 1)"), B3)
        # no disjoint extension can allocate 0 again, so the wand holds vacuously
        assert sat(Heap({0: 0}), Store(), A("(0 |-> 1) -* false"), B3)
        assert not sat(Heap(), Store(), A("(0 |-> 1) -* false"), B3)

    def test_modalities(self):
        s = Store({"x": 1})
        assert sat(Heap({1: 0}), s, A("[[x] := 2](x ~> 2)"), B3)
        assert not sat(Heap(), s, A("[[x] := 2] true"), B3)
        assert sat(Heap(), s, A("[upd x := 2](x |-> 2)"), B3)
        assert sat(Heap({0: 0, 1: 0, 2: 0}), s, A("[y := cons(0)] false"), B3)

    def test_fuel_in_modality(self):
        b = Bounds(3, fuel=2)
        spin = A("[while true do x := x od] true")
        with pytest.raises(FuelExhaustedError):
            sat(Heap(), Store(), spin, b)
        # a definite counterexample outweighs an exhausted branch
        failing = A("[while x < 2 do x := x + 1 od; [x] := 0] true")
        assert not sat(Heap(), Store(), failing, Bounds(3, fuel=5))


class TestLiterals:
    def test_parse(self):
        assert parse_heap("heap{1:2, 5:7}") == Heap({1: 2, 5: 7})
        assert parse_heap("heap{}") == Heap()
        assert parse_store("store{x:1, y:0}") == Store({"x": 1})

    def test_repr_round_trip(self):
        h = Heap({2: 1, 0: 0})
        assert parse_heap(repr(h)) == h
        s = Store({"x": 2, "y": 1})
        assert parse_store(repr(s)) == s

    def test_json(self):
        h, s = Heap({1: 2}), Store({"x": 1})
        obj = state_to_json(h, s, ["x", "y"])
        assert obj == {"heap": {"1": 2}, "store": {"x": 1, "y": 0}}
        assert state_from_json(json.dumps(obj)) == (h, s)

    def test_errors(self):
        from dynsl.errors import DSLSyntaxError
        with pytest.raises(DSLSyntaxError):
            parse_heap("heap{1}")
        with pytest.raises(DSLSyntaxError):
            parse_store("heap{1:2}")
