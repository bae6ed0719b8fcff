import itertools
import time

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import formulas
from lpltl.corpus import corpus_entry, theorem_corpus
from lpltl.proof import (
    AxNec,
    AxNecStar,
    Axiom,
    AxiomName,
    Derivation,
    DerivationBuilder,
    FiniteCS,
    Line,
    MP,
    NecNext,
    ProofFormatError,
    SchematicCS,
    TautologyTooLarge,
    check_derivation,
    cs_lookup,
    cs_restrict,
    is_tautology,
    load_cs,
    match_axiom,
    read_cs,
    read_proof,
    schematic_name,
    star_chain,
    write_cs,
    write_proof,
)
from lpltl.syntax import (
    BOT,
    Bottom,
    Implies,
    Next,
    Prop,
    Variant,
    conj,
    parse_formula,
)

L, S, G = Variant.LPLTL, Variant.LPLTL_STAR, Variant.LPLTL_G


def brute_tautology(f):
    """Row-by-row truth table over maximal non-propositional subformulas."""
    atoms = []

    def collect(g):
        if isinstance(g, Implies):
            collect(g.left)
            collect(g.right)
        elif not isinstance(g, Bottom) and g not in atoms:
            atoms.append(g)

    collect(f)

    def value(g, row):
        if isinstance(g, Implies):
            return (not value(g.left, row)) or value(g.right, row)
        if isinstance(g, Bottom):
            return False
        return row[g]

    return all(value(f, dict(zip(atoms, bits))) for bits in itertools.product((False, True), repeat=len(atoms)))


class TestMatchAxiom:
    def test_application(self):
        f = parse_formula("[x]_1 (P -> Q) -> ([x1]_1 P -> [(x . x1)]_1 Q)")
        assert match_axiom(f, L) == {AxiomName.Application}

    def test_fun(self):
        assert match_axiom(parse_formula("X ~P <-> ~X P"), L) == {AxiomName.Fun}

    def test_taut(self):
        assert match_axiom(parse_formula("P -> P"), L) == {AxiomName.Taut}

    def test_boxed_reflexivity_is_star_only(self):
        f = parse_formula("G ([x]_2 P -> P)")
        assert match_axiom(f, S) == {AxiomName.BoxedReflexivity}
        assert match_axiom(f, L) == frozenset()

    @pytest.mark.parametrize(
        "text,name",
        [
            ("X (P -> Q) -> (X P -> X Q)", AxiomName.NextK),
            ("G (P -> Q) -> (G P -> G Q)", AxiomName.BoxK),
            ("G (P -> X P) -> (P -> G P)", AxiomName.Ind),
            ("(P U Q) -> F Q", AxiomName.Until1),
            ("(P U Q) <-> (Q | (P & X (P U Q)))", AxiomName.Until2),
            ("[x]_1 P -> [(x + x1)]_1 P", AxiomName.Sum),
            ("[x1]_1 P -> [(x + x1)]_1 P", AxiomName.Sum),
            ("[x]_1 P -> P", AxiomName.Reflexivity),
            ("[x]_2 P -> [!x]_2 [x]_2 P", AxiomName.PositiveIntrospection),
        ],
    )
    def test_core_schemas(self, text, name):
        assert name in match_axiom(parse_formula(text), L)

    def test_mix(self):
        f = parse_formula("G P -> X P")
        assert AxiomName.Mix in match_axiom(f, S)
        assert AxiomName.Mix in match_axiom(f, G)
        assert match_axiom(f, L) == frozenset()

    def test_generalize_and_experimental(self):
        gen = parse_formula("G [x]_1 P -> [up x]_1 G P")
        assert match_axiom(gen, G) == {AxiomName.Generalize}
        access = parse_formula("[x]_1 G P -> G [dn x]_1 P")
        assert match_axiom(access, G) == frozenset()
        assert match_axiom(access, G, experimental=True) == {AxiomName.BoxAccess}
        nxt = parse_formula("[x]_1 X P -> X [rr x]_1 P")
        assert match_axiom(nxt, S, experimental=True) == {AxiomName.NextAccess}
        left = parse_formula("X [x]_1 P -> [ll x]_1 X P")
        assert match_axiom(left, S, experimental=True) == {AxiomName.NextLeft}

    def test_non_instances(self):
        assert match_axiom(parse_formula("P -> Q"), L) == frozenset()
        assert match_axiom(parse_formula("[x]_1 P -> [(x . x1)]_1 P"), L) == frozenset()
        assert match_axiom(parse_formula("[x]_1 P -> [!x]_2 [x]_1 P"), L) == frozenset()

    @settings(max_examples=300, deadline=None)
    @given(formulas(max_leaves=10))
    def test_lpltl_schemas_are_star_schemas(self, f):
        assert match_axiom(f, L) <= match_axiom(f, S)

    @settings(max_examples=400, deadline=None)
    @given(formulas(max_leaves=14))
    def test_taut_agrees_with_row_enumeration(self, f):
        assert is_tautology(f) == brute_tautology(f)

    @settings(max_examples=200, deadline=None)
    @given(st.lists(st.sampled_from(["P", "Q", "R", "X P", "(P U Q)", "[x]_1 P"]), min_size=1, max_size=6))
    def test_taut_on_implication_chains(self, parts):
        f = parse_formula(" -> ".join(parts + [parts[0]]))
        assert is_tautology(f) == brute_tautology(f)

    def test_taut_cap(self):
        props = [Prop(f"P{k}") for k in range(21)]
        f = BOT
        for p in props:
            f = Implies(p, f)
        with pytest.raises(TautologyTooLarge):
            is_tautology(f)


class TestConstantSpecs:
    A = parse_formula("P -> P")

    def test_finite_lookup(self):
        cs = FiniteCS(frozenset({("c1", 1, self.A)}))
        assert cs_lookup(cs, "c1", 1, self.A)
        assert not cs_lookup(cs, "c1", 2, self.A)

    def test_schematic_lookup(self):
        fun = parse_formula("X ~P <-> ~X P")
        cs = SchematicCS(L)
        assert cs_lookup(cs, schematic_name(fun, 1), 1, fun)
        assert not cs_lookup(cs, schematic_name(fun, 1), 2, fun)
        assert not cs_lookup(cs, schematic_name(parse_formula("P"), 1), 1, parse_formula("P"))

    def test_schematic_names_are_deterministic(self):
        assert schematic_name(self.A, 1) == schematic_name(parse_formula("(P -> P)"), 1)
        assert schematic_name(self.A, 1) != schematic_name(self.A, 2)
        assert schematic_name(self.A, 1).startswith("c_")

    def test_restrict(self):
        mix = parse_formula("G P -> X P")
        cs = FiniteCS(frozenset({("c1", 1, mix), ("c2", 1, self.A)}))
        assert cs_restrict(cs) == FiniteCS(frozenset({("c2", 1, self.A)}))
        assert cs_restrict(FiniteCS(frozenset())) == FiniteCS(frozenset())
        restricted = cs_restrict(SchematicCS(S))
        assert restricted.variant is L
        assert not restricted.contains(schematic_name(mix, 1), 1, mix)

    def test_one_constant_many_axioms_in_finite_mode(self):
        b = parse_formula("Q -> Q")
        cs = FiniteCS(frozenset({("c", 1, self.A), ("c", 1, b)}))
        assert cs.contains("c", 1, self.A) and cs.contains("c", 1, b)

    def test_cs_file_round_trip(self, tmp_path):
        cs = FiniteCS(frozenset({("c1", 1, self.A), ("c2", 2, parse_formula("G P -> X P"))}))
        text = write_cs(cs)
        assert read_cs(text) == cs
        path = tmp_path / "star.cs"
        path.write_text(text)
        assert load_cs(str(path), S) == cs
        with pytest.raises(ProofFormatError):
            load_cs(str(path), L)

    def test_cs_file_errors(self):
        with pytest.raises(ProofFormatError) as err:
            read_cs("c1 1 : P ->\n")
        assert err.value.line == 1
        with pytest.raises(ProofFormatError):
            read_cs("x1 1 : P -> P\n")


class TestChecker:
    def test_mix1_checks(self):
        d = corpus_entry("mix1")
        assert check_derivation(d, SchematicCS(L)).ok
        assert d.conclusion == parse_formula("G P -> (P & X G P)")
        assert all(isinstance(ln.just, (Axiom, MP)) for ln in d.lines)

    def test_next_necessitation_by_variant(self):
        b = DerivationBuilder(L)
        b.nec_next(b.taut("P -> P"))
        d = b.build()
        assert check_derivation(d, SchematicCS(L)).ok
        rep = check_derivation(d, SchematicCS(S), variant=S)
        assert not rep.ok
        assert rep.first_failure.index == 2
        assert rep.first_failure.error == "RuleNotInVariant"

    def test_bad_mp(self):
        d = Derivation(
            [
                Line(1, parse_formula("P -> P"), Axiom(AxiomName.Taut)),
                Line(2, parse_formula("Q -> (P -> P)"), Axiom(AxiomName.Taut)),
                Line(3, parse_formula("Q"), MP(1, 2)),
            ]
        )
        assert check_derivation(d, SchematicCS(L)).first_failure.error == "BadMP"

    def test_swapped_mp_citation(self):
        b = DerivationBuilder(L)
        a = b.taut("P -> P")
        imp = b.taut("(P -> P) -> (Q -> Q)")
        b.add("Q -> Q", MP(imp, a))
        assert check_derivation(b.build(), SchematicCS(L)).ok

    def test_bad_axiom_and_reference(self):
        d = Derivation([Line(1, parse_formula("P -> Q"), Axiom(AxiomName.Taut))])
        assert check_derivation(d, SchematicCS(L)).first_failure.error == "BadAxiomInstance"
        d = Derivation([Line(1, parse_formula("X P"), NecNext(1))])
        assert check_derivation(d, SchematicCS(L)).first_failure.error == "BadReference"

    def test_index_order(self):
        d = Derivation(
            [
                Line(2, parse_formula("P -> P"), Axiom(AxiomName.Taut)),
                Line(1, parse_formula("P -> P"), Axiom(AxiomName.Taut)),
            ]
        )
        assert check_derivation(d, SchematicCS(L)).first_failure.error == "BadIndex"

    def test_not_in_cs(self):
        a = parse_formula("P -> P")
        d = Derivation([Line(1, parse_formula("[c9]_1 (P -> P)"), AxNec("c9", 1))])
        assert check_derivation(d, SchematicCS(L)).first_failure.error == "NotInCS"
        assert check_derivation(d, FiniteCS(frozenset({("c9", 1, a)}))).ok

    def test_star_chain_shape(self):
        a = parse_formula("P -> P")
        c = schematic_name(a, 1)
        good = Derivation([Line(1, star_chain(c, (1, 2), a), AxNecStar(1, c, (1, 2)))], S)
        assert check_derivation(good, SchematicCS(S)).ok
        wrong_agents = Derivation([Line(1, star_chain(c, (1, 2), a), AxNecStar(1, c, (1, 1)))], S)
        assert check_derivation(wrong_agents, SchematicCS(S)).first_failure.error == "MalformedStarChain"
        unboxed = parse_formula(f"[*{c}]_2 [{c}]_1 (P -> P)")
        bad = Derivation([Line(1, unboxed, AxNecStar(1, c, (1, 2)))], S)
        assert check_derivation(bad, SchematicCS(S)).first_failure.error == "MalformedStarChain"

    def test_star_rule_depth_limited_in_lpltl(self):
        a = parse_formula("P -> P")
        c = schematic_name(a, 1)
        d = Derivation([Line(1, star_chain(c, (1, 2), a), AxNecStar(1, c, (1, 2)))], L)
        rep = check_derivation(d, SchematicCS(L))
        assert not rep.ok

    def test_operator_and_agent_gating(self):
        d = Derivation([Line(1, parse_formula("[*x]_1 P -> P"), Axiom(AxiomName.Reflexivity))], L)
        assert check_derivation(d, SchematicCS(L)).first_failure.error == "OperatorNotInVariant"
        d = Derivation([Line(1, parse_formula("[x]_3 P -> P", None), Axiom(AxiomName.Reflexivity))], L, 2)
        assert check_derivation(d, SchematicCS(L)).first_failure.error == "AgentOutOfRange"

    def test_mixed_box_and_next_rules(self):
        b = DerivationBuilder(L)
        t = b.taut("P -> P")
        b.nec_next(b.nec_box(t))
        assert check_derivation(b.build(), SchematicCS(L)).ok


class TestCorpus:
    def test_every_entry_checks(self):
        for name, d, variant in theorem_corpus():
            rep = check_derivation(d, SchematicCS(variant))
            assert rep.ok, (name, rep.summary())

    def test_named_conclusions(self):
        assert corpus_entry("mix1").conclusion == parse_formula("G P -> (P & X G P)")
        assert corpus_entry("until-refl").conclusion == parse_formula("(P U P) -> F P")
        boxed = corpus_entry("boxedrefl-star")
        assert len(boxed) == 1 and boxed.variant is S

    def test_size(self):
        corpus = theorem_corpus()
        assert len(corpus) >= 12
        assert {v for _, _, v in corpus} == {L, S, G}

    def test_fast(self):
        t0 = time.perf_counter()
        for _, d, variant in theorem_corpus():
            check_derivation(d, SchematicCS(variant))
        assert time.perf_counter() - t0 < 1.0


class TestProofFiles:
    def test_round_trip(self):
        for _, d, _ in theorem_corpus():
            again = read_proof(write_proof(d))
            assert again.lines == d.lines
            assert again.variant is d.variant

    def test_comments_and_headers(self):
        text = "# example\nvariant: LPLTL\nagents: 1\ncs: schematic\n1. P -> P ; TAUT\n2. X (P -> P) ; NECX 1  # next\n"
        d = read_proof(text)
        assert d.agents == 1 and len(d) == 2
        assert d.conclusion == Next(parse_formula("P -> P"))
        assert check_derivation(d, SchematicCS(L)).ok

    @pytest.mark.parametrize(
        "text",
        [
            "1. P -> P\n",
            "one. P -> P ; TAUT\n",
            "1. P -> ; TAUT\n",
            "1. P -> P ; FROB\n",
            "1. P -> P ; MP 1\n",
            "agents: many\n",
        ],
    )
    def test_format_errors(self, text):
        with pytest.raises(ProofFormatError):
            read_proof(text, "bad.prf")

    def test_error_carries_line(self):
        with pytest.raises(ProofFormatError) as err:
            read_proof("1. P -> P ; TAUT\n\n3. Q ; WHAT\n", "x.prf")
        assert err.value.line == 3
        assert "x.prf:3" in str(err.value)


class TestBuilder:
    def test_mp_shape_check(self):
        b = DerivationBuilder(L)
        a = b.taut("P -> P")
        with pytest.raises(ValueError):
            b.mp(a, a)

    def test_conj_helper_matches_parser(self):
        assert conj(Prop("P"), Prop("Q")) == parse_formula("P & Q")

    def test_box_chain_builder(self):
        b = DerivationBuilder(S)
        a = parse_formula("P -> P")
        c = schematic_name(a, 1)
        k = b.cs_star(c, (1, 2, 1), a)
        expected = parse_formula(f"[**{c}]_1 G [*{c}]_2 G [{c}]_1 (P -> P)")
        assert b.formula(k) == expected
        assert b.lines[-1].just == AxNecStar(2, c, (1, 2, 1))
