import pytest

from dynsl.errors import StepLimitExceeded, UnsupportedModality
from dynsl.generate import BASIC_KINDS, Generator
from dynsl.oracle import Valid, triple_valid, valid
from dynsl.rewrite import (
    OUTERMOST, PathOrder, Rule, frame_for_mutation,
    normalize, prepare, resugar, rewrite_step, simplify,
)
from dynsl.syntax import (
    Box, Forall, FreshNames, Imp, PointsStrong, SepConj, Var, alpha_equiv,
    desugar, has_modality, parse_assertion, show, show_expr,
)
from dynsl.vc import Triple, sp

from helpers import A, B4, S, equivalent, free_reserved


def first_step(text):
    p = A(text)
    fresh = FreshNames.above(p)
    before = prepare(p, fresh)
    after, rule, path = rewrite_step(before, fresh=fresh)
    return before, after, rule, path


RULE_CASES = [
    ("[x := e] false", Rule.E1),
    ("[x := 1](y ~> 1 -> x = 1)", Rule.E2),
    ("[x := 1](y ~> 1 * x = 1)", Rule.E2),
    ("[x := y](forall y (x ~> y))", Rule.E3),
    ("[x := 1](x ~> y)", Rule.E4),
    ("[x := 2](x < y)", Rule.E4),
    ("[x := [y]](x = 1)", Rule.E5),
    ("[[x] := 1](y ~> 1)", Rule.E6),
    ("[x := cons(1)](x ~> 1)", Rule.E7),
    ("[dispose(x)](y = 1)", Rule.E8),
    ("[upd x := 1](y = 0)", Rule.E9),
    ("[upd x := 1](y ~> z)", Rule.E10),
    ("[upd x := 1](y ~> 1 -> z ~> 0)", Rule.E2),
    ("[upd x := z](forall z (z ~> x))", Rule.E3),
    ("[upd x := 1](y ~> 1 * z ~> 0)", Rule.E11),
    ("[upd x := 1](y ~> 1 -* z ~> 0)", Rule.E12),
    ("[clr x](y = 0)", Rule.E13),
    ("[clr x](y ~> z)", Rule.E14),
    ("[clr x](y ~> 1 -> z ~> 0)", Rule.E2),
    ("[clr x](forall x (x ~> 1))", Rule.E3),
    ("[clr x](y ~> 1 * z ~> 0)", Rule.E15),
    ("[clr x](y ~> 1 -* z ~> 0)", Rule.E16),
]


class TestRules:
    @pytest.mark.parametrize("text, rule", RULE_CASES)
    def test_rule_fires_and_is_sound(self, text, rule):
        before, after, got, path = first_step(text)
        assert got == rule
        assert path == ()
        assert equivalent(before, after)

    def test_e1(self):
        _, after, _, _ = first_step("[x := e] false")
        assert after == A("false")

    def test_e10_shape(self):
        _, after, _, _ = first_step("[upd x := e](y ~> z)")
        assert equivalent(after, A("x = y && z = e \\/ !(x = y) /\\ y ~> z"))
        assert show(resugar(after)) == "x = y && z = e \\/ !(x = y) /\\ y ~> z"

    def test_e15_shape(self):
        _, after, _, _ = first_step("[clr x](y ~> 1 * z ~> 0)")
        assert after == A("[clr x](y ~> 1) * [clr x](z ~> 0)")

    def test_e3_renames_clashing_binder(self):
        _, after, _, _ = first_step("[x := y](forall y (x ~> y))")
        assert isinstance(after, Forall) and after.var != "y"
        assert not free_reserved(after)

    def test_e7_needs_simulation_first(self):
        from dynsl.rewrite import contract
        with pytest.raises(UnsupportedModality):
            contract(A("[x := cons(x)](x ~> 1)"), FreshNames(1))

    def test_nested_box_is_not_a_redex_until_inner_is_gone(self):
        p = desugar(A("[upd x := 1][clr x](y ~> 1)"))
        fresh = FreshNames.above(p)
        _, rule, path = rewrite_step(p, fresh=fresh)
        assert (rule, path) == (Rule.E14, (0,))
        _, rule, path = rewrite_step(p, OUTERMOST, fresh=fresh)
        assert (rule, path) == (Rule.E14, (0,))

    def test_compound_statement_rejected(self):
        with pytest.raises(UnsupportedModality):
            normalize(A("[x := 1; y := 2](x = y)"))
        with pytest.raises(UnsupportedModality):
            rewrite_step(Box(S("if x = 0 then x := 1 else x := 2 fi"), A("true")))

    def test_unknown_strategy(self):
        with pytest.raises(ValueError):
            rewrite_step(A("true"), "sideways")


class TestNormalize:
    def test_update_example(self):
        nf, trace = normalize(A("[upd x := e](y ~> -)"))
        assert not has_modality(nf)
        assert equivalent(nf, A("!(y = x) -> y ~> -"))
        assert [s.rule for s in trace] == [Rule.E2, Rule.E3, Rule.E2, Rule.E10, Rule.E9, Rule.E9]

    def test_mutation_example(self):
        nf, _ = normalize(A("[[x] := 0](y ~> z)"))
        assert show(resugar(nf)) == "x ~> - /\\ (x = y && z = 0 \\/ !(x = y) /\\ y ~> z)"
        assert equivalent(nf, A("(x ~> -) /\\ ((y = x && z = 0) \\/ (!(y = x) /\\ y ~> z))"))

    def test_modality_free_input_is_normal(self):
        q = desugar(A("forall y (x ~> y -> emp) * true"))
        nf, trace = normalize(q)
        assert nf == q and trace == []

    def test_allocation_reading_its_target(self):
        nf, _ = normalize(A("[x := cons(x)](x ~> y)"))
        assert equivalent(nf, A("[x := cons(x)](x ~> y)"))
        assert equivalent(nf, A("(forall z (z ~> -)) \\/ y = x"))

    def test_trace_paths_point_at_redexes(self):
        p = A("[y := [x]](y = 1) * ([clr x](z ~> 1) -* [upd x := 1] emp)")
        fresh = FreshNames.above(p)
        cur = prepare(p, fresh)
        nf, trace = normalize(p)
        for step in trace:
            node = cur
            for i in step.path:
                node = [node.left, node.right][i] if hasattr(node, "left") else node.body
            assert isinstance(node, Box)
            cur = step.formula
        assert cur == nf

    def test_step_limit(self):
        with pytest.raises(StepLimitExceeded):
            normalize(A("[upd x := 1](y ~> 1 * z ~> 1)"), max_steps=2)

    def test_recursive_pass_matches_stepwise_rewriting(self):
        g = Generator(5)
        for _ in range(60):
            p = Box(g.basic(), g.assertion(3))
            fast, fast_trace = normalize(p)
            fresh = FreshNames.above(p)
            cur, steps = prepare(p, fresh), []
            while (found := rewrite_step(cur, fresh=fresh)) is not None:
                cur, rule, path = found
                steps.append((rule, path, cur))
            assert fast == cur
            assert [(s.rule, s.path, s.formula) for s in fast_trace] == steps

    def test_json_trace(self):
        _, trace = normalize(A("[clr x](y ~> 1)"))
        assert trace[0].to_json()["rule"] == "E14"
        assert trace[0].describe().startswith("E14 @ path root: ")


class TestProperties:
    def test_order_descends_at_every_step(self):
        g = Generator(9, modal_rate=0.3)
        for _ in range(80):
            p = Box(g.basic(), g.assertion(3))
            fresh = FreshNames.above(p)
            cur = prepare(p, fresh)
            order = PathOrder()
            while (found := rewrite_step(cur, OUTERMOST, fresh=fresh)) is not None:
                assert order.greater(cur, found[0])
                assert not order.greater(found[0], cur)
                cur = found[0]

    def test_order_along_innermost_traces(self):
        g = Generator(10, modal_rate=0.4)
        for _ in range(80):
            p = Box(g.basic(), g.assertion(3))
            fresh = FreshNames.above(p)
            prev = prepare(p, fresh)
            order = PathOrder()
            for step in normalize(p, fresh=FreshNames.above(p))[1]:
                assert order.greater(prev, step.formula)
                prev = step.formula

    def test_nested_modality_case(self):
        # the inner lookup grows the outer body, yet the order still descends
        p = prepare(A("[x := 1][y := [x]](y = 1)"), FreshNames(1))
        q, rule, _ = rewrite_step(p)
        assert rule == Rule.E5
        assert PathOrder().greater(p, q)

    def test_order_basics(self):
        order = PathOrder()
        assert order.greater(A("[clr x](y ~> 1)"), A("[upd x := 1](y ~> 1)"))
        assert order.greater(A("[x := 1](y ~> 1 -> y ~> 1)"), A("[x := 1](y ~> 1)"))
        assert not order.greater(A("y ~> 1"), A("y ~> 1"))
        assert not order.greater(A("y ~> 1 * z = 0"), A("z = 0 * y ~> 1"))

    def test_hygiene_and_modality_freedom(self):
        g = Generator(13, modal_rate=0.3)
        for _ in range(100):
            nf, _ = normalize(Box(g.basic(), g.assertion(3)))
            assert not has_modality(nf)
            assert not free_reserved(nf)

    def test_strategies_agree(self):
        g = Generator(17)
        for _ in range(40):
            p = Box(g.basic(), g.assertion(2))
            a, _ = normalize(p)
            b, _ = normalize(p, OUTERMOST)
            assert equivalent(a, b)

    def test_strategies_alpha_equal_without_fresh_names(self):
        p = A("[x := 1][y := x](x ~> y -> forall z (z = y))")
        a, ta = normalize(p)
        b, tb = normalize(p, OUTERMOST)
        assert alpha_equiv(a, b)
        assert [s.rule for s in ta] != [s.rule for s in tb]

    def test_sound_on_every_instruction(self):
        g = Generator(23)
        for kind in BASIC_KINDS:
            for _ in range(15):
                p = Box(g.basic(kind), g.assertion(3))
                assert equivalent(p, normalize(p)[0])


class TestSimplify:
    def test_interplay_update_then_clear(self):
        assert simplify(A("[upd x := e][clr x](y ~> 1)")) == A("[clr x](y ~> 1)")

    def test_interplay_clear_when_unallocated(self):
        assert simplify(A("!(x ~> -) /\\ [clr x](y ~> 1)")) == A("!(x ~> -) /\\ y ~> 1")

    def test_propositional(self):
        assert simplify(A("y ~> 1 /\\ true")) == A("y ~> 1")
        assert simplify(A("y ~> 1 \\/ false")) == A("y ~> 1")
        assert simplify(A("!!(y ~> 1)")) == A("y ~> 1")
        assert simplify(A("x = x")) == A("true")
        assert simplify(A("forall z (y ~> 1)")) == A("y ~> 1")

    def test_interplay_laws_are_sound(self):
        for text in ("[upd x := e][clr x](y ~> 1 * true)", "[upd x := 2][clr x] emp"):
            assert equivalent(A(text), simplify(A(text)))
        assert equivalent(A("!(x ~> -) /\\ [clr x] emp"), A("!(x ~> -) /\\ emp"))

    def test_sound_on_normal_forms(self):
        g = Generator(31)
        for _ in range(60):
            p = Box(g.basic(), g.assertion(3))
            nf, _ = normalize(p)
            assert equivalent(nf, simplify(nf))
            assert equivalent(nf, resugar(nf))

    def test_sound_on_modal_formulas(self):
        g = Generator(37, modal_rate=0.5)
        for _ in range(60):
            p = g.assertion(3)
            assert equivalent(p, simplify(p))

    def test_recovers_sugar(self):
        nf, _ = normalize(A("[x := cons(1)](y ~> 0)"))
        assert show(simplify(nf)) == "forall x (!x ~> - -> !(x = y) /\\ y ~> 0)"


class TestFrame:
    def test_singleton(self):
        f = frame_for_mutation(A("x |-> 3"), "x")
        assert not has_modality(f)
        assert equivalent(f, A("emp \\/ x |-> -"), B4)
        assert equivalent(SepConj(A("x |-> -"), f), A("x |-> -"), B4)

    def test_two_cells(self):
        f = frame_for_mutation(A("(x |-> 1) * (y |-> 2)"), "x")
        expected = A("(y |-> 2 \\/ (y |-> 2) * (x |-> -)) /\\ !(x = y)")
        assert equivalent(f, expected)
        assert equivalent(SepConj(A("x |-> -"), f), A("(x |-> -) * (y |-> 2)"))

    def test_obligations(self):
        g = Generator(41)
        for _ in range(30):
            x, e = g.var(), g.expr()
            p = parse_assertion(f"({show(g.first_order(2))}) /\\ {x} ~> -")
            stmt = S(f"[{x}] := {show_expr(e)}")
            _, q = sp(stmt, p)
            assert triple_valid(Triple(p, stmt, q)) == Valid()
            r = frame_for_mutation(p, x)
            assert valid(Imp(p, SepConj(A(f"{x} |-> -"), r))) == Valid()
            assert valid(Imp(SepConj(PointsStrong(Var(x), e), r), q)) == Valid()
