import pytest
from hypothesis import given, settings

from conftest import formulas, terms
from lpltl.syntax import (
    BOT,
    TOP,
    AgentOutOfRange,
    App,
    Bang,
    Bottom,
    Const,
    Implies,
    Just,
    Next,
    ParseError,
    Prop,
    Star,
    Sum,
    Until,
    Var,
    Variant,
    VariantError,
    box,
    closure_plus,
    conj,
    diamond,
    disj,
    iff,
    neg,
    parse_formula,
    parse_term,
    pretty,
    print_formula,
    print_term,
    star_n,
    subformulas,
    unstar,
)

P, Q = Prop("P"), Prop("Q")


class TestParsing:
    def test_always_desugars_through_until(self):
        expected = Implies(Until(Implies(BOT, BOT), Implies(P, BOT)), BOT)
        assert parse_formula("G P") == expected

    def test_false_literal(self):
        assert parse_formula("false") == Bottom()

    def test_justification_constructor(self):
        assert parse_formula("[x]_1 (P -> Q)") == Just(Var("x"), 1, Implies(P, Q))

    def test_terms(self):
        assert parse_term("!(c1 + x1)") == Bang(Sum(Const("c1"), Var("x1")))
        assert parse_term("*(*(c1))") == Star(Star(Const("c1")))
        assert parse_term("(c1 . x1)") == App(Const("c1"), Var("x1"))

    def test_sugar(self):
        assert parse_formula("true") == TOP
        assert parse_formula("~P") == neg(P)
        assert parse_formula("P | Q") == disj(P, Q)
        assert parse_formula("P & Q") == conj(P, Q)
        assert parse_formula("P <-> Q") == iff(P, Q)
        assert parse_formula("F P") == diamond(P)
        assert parse_formula("G P") == box(P)

    def test_precedence(self):
        # unary binds tighter than U, U tighter than &, & tighter than |, then ->, then <->
        assert parse_formula("X P U Q") == Until(Next(P), Q)
        assert parse_formula("P U Q & P") == conj(Until(P, Q), P)
        assert parse_formula("P & Q | P") == disj(conj(P, Q), P)
        assert parse_formula("P | Q -> P") == Implies(disj(P, Q), P)
        assert parse_formula("P -> Q <-> Q") == iff(Implies(P, Q), Q)

    def test_right_associative(self):
        assert parse_formula("P -> Q -> P") == Implies(P, Implies(Q, P))
        assert parse_formula("P U Q U P") == Until(P, Until(Q, P))

    def test_term_precedence(self):
        assert parse_term("x + x1 . x2") == Sum(Var("x"), App(Var("x1"), Var("x2")))
        assert parse_term("x . x1 . x2") == App(App(Var("x"), Var("x1")), Var("x2"))

    def test_unicode_aliases(self):
        assert parse_formula("□P → ○P") == Implies(box(P), Next(P))
        assert parse_formula("⟦x⟧₂ P") == Just(Var("x"), 2, P)

    def test_syntax_error_reports_position_and_expectation(self):
        with pytest.raises(ParseError) as err:
            parse_formula("P ->")
        assert err.value.position == 4
        assert err.value.expected

    def test_identifier_classes(self):
        with pytest.raises(ParseError):
            parse_term("y")
        with pytest.raises(ParseError):
            parse_formula("[y]_1 P")

    def test_agent_range(self):
        with pytest.raises(AgentOutOfRange):
            parse_formula("[x]_3 P", agents=2)
        with pytest.raises(AgentOutOfRange):
            parse_formula("[x]_0 P", agents=2)

    def test_variant_gating(self):
        with pytest.raises(VariantError):
            parse_formula("[*c]_1 P", variant=Variant.LPLTL)
        assert parse_formula("[*c]_1 P", variant=Variant.LPLTL_STAR)
        with pytest.raises(VariantError):
            parse_term("up x", variant=Variant.LPLTL_STAR)
        assert parse_term("up x", variant=Variant.LPLTL_G) is not None
        with pytest.raises(VariantError):
            parse_term("dn x", variant=Variant.LPLTL_G)
        assert parse_term("dn x", variant=Variant.LPLTL_G, experimental=True) is not None


class TestPrinting:
    def test_examples(self):
        assert print_formula(Bottom()) == "false"
        assert print_formula(Just(Var("x"), 2, P)) == "[x]_2 P"
        assert print_formula(Until(P, Q)) == "(P U Q)"

    def test_pretty_resugars(self):
        assert pretty(parse_formula("G (P -> X P)")) == "G (P -> X P)"
        assert pretty(parse_formula("~P & F Q")) == "(~P & F Q)"

    @settings(max_examples=300, deadline=None)
    @given(formulas(agents=2, star=True, experimental=True, max_leaves=20))
    def test_round_trip(self, f):
        assert parse_formula(print_formula(f), agents=2) == f

    @settings(max_examples=300, deadline=None)
    @given(formulas(agents=2, star=True, max_leaves=20))
    def test_pretty_round_trip(self, f):
        assert parse_formula(pretty(f), agents=2) == f

    @settings(max_examples=200, deadline=None)
    @given(terms(star=True, experimental=True))
    def test_term_round_trip(self, t):
        assert parse_term(print_term(t)) == t

    def test_star_powers(self):
        assert unstar(star_n(Const("c"), 3)) == (Const("c"), 3)
        assert star_n(Const("c"), 0) == Const("c")


class TestClosure:
    def test_subformulas_of_justification(self):
        t = Var("x")
        assert set(subformulas(Just(t, 1, P))) == {Just(t, 1, P), P}

    def test_subformulas_of_bottom(self):
        assert subformulas(BOT) == (BOT,)

    def test_subformulas_of_until(self):
        f = Until(P, Implies(P, BOT))
        assert set(subformulas(f)) == {f, P, Implies(P, BOT), BOT}

    def test_closure_plus(self):
        assert set(closure_plus(P)) == {P, neg(P)}
        assert set(closure_plus(BOT)) == {BOT, neg(BOT)}
        assert set(closure_plus(Next(P))) == {Next(P), P, neg(Next(P)), neg(P)}

    @settings(max_examples=200, deadline=None)
    @given(formulas(max_leaves=16))
    def test_closure_properties(self, f):
        sub = subformulas(f)
        plus = closure_plus(f)
        assert len(set(sub)) == len(sub)
        assert set(sub) <= set(plus)
        assert len(plus) <= 2 * len(sub)
        for g in sub:
            assert set(subformulas(g)) <= set(sub)

    @settings(max_examples=200, deadline=None)
    @given(formulas(max_leaves=16))
    def test_only_core_nodes(self, f):
        g = parse_formula(pretty(f))
        assert all(isinstance(h, (Prop, Bottom, Implies, Next, Until, Just)) for h in subformulas(g))

    def test_double_negation_kept(self):
        assert parse_formula("~~P") == neg(neg(P))
