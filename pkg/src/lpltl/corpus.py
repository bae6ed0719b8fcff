"""Hand-encoded derivations used as regression fixtures and test inputs."""

from __future__ import annotations

from .proof import AxiomName, Derivation, DerivationBuilder, schematic_name
from .syntax import (
    TOP,
    Formula,
    Implies,
    Next,
    Until,
    Variant,
    box,
    conj,
    disj,
    iff,
    neg,
    parse_formula,
)


def add_mix1(b: DerivationBuilder, phi: Formula) -> int:
    """Append a derivation of ``G phi -> (phi & X G phi)`` using MP only.

    Returns the index of the concluding line.
    """
    eventually_not = Until(TOP, neg(phi))  # G phi is its negation
    u2 = b.axiom(
        iff(eventually_not, disj(neg(phi), conj(TOP, Next(eventually_not)))), AxiomName.Until2
    )
    step = Implies(neg(eventually_not), conj(phi, neg(Next(eventually_not))))
    contra = b.taut(Implies(b.formula(u2), step))
    l3 = b.mp(u2, contra)
    fun = b.axiom(iff(Next(neg(eventually_not)), neg(Next(eventually_not))), AxiomName.Fun)
    goal = Implies(neg(eventually_not), conj(phi, Next(neg(eventually_not))))
    swap = b.taut(Implies(b.formula(fun), Implies(step, goal)))
    l6 = b.mp(fun, swap)
    return b.mp(l3, l6)


def add_box_elim(b: DerivationBuilder, phi: Formula) -> int:
    """Append a derivation of ``G phi -> phi`` (axioms and MP only)."""
    mix = add_mix1(b, phi)
    proj = b.taut(Implies(b.formula(mix), Implies(box(phi), phi)))
    return b.mp(mix, proj)


def mix1_derivation(phi: Formula, variant: Variant = Variant.LPLTL) -> Derivation:
    b = DerivationBuilder(variant)
    add_mix1(b, phi)
    return b.build()


def box_elim_derivation(phi: Formula, variant: Variant = Variant.LPLTL) -> Derivation:
    b = DerivationBuilder(variant)
    add_box_elim(b, phi)
    return b.build()


def _until_refl() -> DerivationBuilder:
    b = DerivationBuilder()
    b.axiom("(P U P) -> F P", AxiomName.Until1)
    return b


def _nec_next_taut() -> DerivationBuilder:
    b = DerivationBuilder()
    b.nec_next(b.taut("P -> P"))
    return b


def _nec_box_taut() -> DerivationBuilder:
    b = DerivationBuilder()
    b.nec_box(b.taut("P -> P"))
    return b


def _nested_box() -> DerivationBuilder:
    b = DerivationBuilder()
    b.nec_box(b.nec_box(b.taut("P -> (Q -> P)")))
    return b


def _box_and_left() -> DerivationBuilder:
    b = DerivationBuilder()
    t = b.taut("(P & Q) -> P")
    g = b.nec_box(t)
    k = b.axiom("G ((P & Q) -> P) -> (G (P & Q) -> G P)", AxiomName.BoxK)
    b.mp(g, k)
    return b


def _next_and_left() -> DerivationBuilder:
    b = DerivationBuilder()
    t = b.taut("(P & Q) -> P")
    x = b.nec_next(t)
    k = b.axiom("X ((P & Q) -> P) -> (X (P & Q) -> X P)", AxiomName.NextK)
    b.mp(x, k)
    return b


def _fun_contra() -> DerivationBuilder:
    b = DerivationBuilder()
    fun = b.axiom("X ~P <-> ~X P", AxiomName.Fun)
    t = b.taut("(X ~P <-> ~X P) -> (~X P -> X ~P)")
    b.mp(fun, t)
    return b


def _until_intro() -> DerivationBuilder:
    b = DerivationBuilder()
    u2 = b.axiom("(P U Q) <-> (Q | (P & X (P U Q)))", AxiomName.Until2)
    t = b.taut("((P U Q) <-> (Q | (P & X (P U Q)))) -> (Q -> (P U Q))")
    b.mp(u2, t)
    return b


def _introspect_refl() -> DerivationBuilder:
    b = DerivationBuilder()
    r1 = b.axiom("[!x]_1 [x]_1 P -> [x]_1 P", AxiomName.Reflexivity)
    r2 = b.axiom("[x]_1 P -> P", AxiomName.Reflexivity)
    t = b.taut(
        "([!x]_1 [x]_1 P -> [x]_1 P) -> (([x]_1 P -> P) -> ([!x]_1 [x]_1 P -> P))"
    )
    b.mp(r2, b.mp(r1, t))
    return b


def _sum_chain() -> DerivationBuilder:
    b = DerivationBuilder()
    s1 = b.axiom("[x1]_1 P -> [(x1 + x2)]_1 P", AxiomName.Sum)
    s2 = b.axiom("[(x1 + x2)]_1 P -> [((x1 + x2) + x3)]_1 P", AxiomName.Sum)
    t = b.taut(
        "([x1]_1 P -> [(x1 + x2)]_1 P) -> (([(x1 + x2)]_1 P -> [((x1 + x2) + x3)]_1 P)"
        " -> ([x1]_1 P -> [((x1 + x2) + x3)]_1 P))"
    )
    b.mp(s2, b.mp(s1, t))
    return b


def _app_cs() -> DerivationBuilder:
    b = DerivationBuilder()
    k = parse_formula("P -> (Q -> P)")
    c = schematic_name(k, 1)
    line = b.cs(c, 1, k)
    app = b.axiom(f"[{c}]_1 (P -> (Q -> P)) -> ([x]_1 P -> [({c} . x)]_1 (Q -> P))", AxiomName.Application)
    b.mp(line, app)
    return b


def _cs_taut() -> DerivationBuilder:
    b = DerivationBuilder()
    k = parse_formula("P -> P")
    b.cs(schematic_name(k, 2), 2, k)
    return b


def _mix_derived() -> DerivationBuilder:
    b = DerivationBuilder()
    p = parse_formula("P")
    mix = add_mix1(b, p)
    proj = b.taut(Implies(b.formula(mix), Implies(box(p), p)))
    elim = b.mp(mix, proj)
    nx = b.nec_next(elim)
    k = b.axiom("X (G P -> P) -> (X G P -> X P)", AxiomName.NextK)
    step = b.mp(nx, k)
    comp = b.taut(
        Implies(b.formula(mix), Implies(b.formula(step), Implies(box(p), Next(p))))
    )
    b.mp(step, b.mp(mix, comp))
    return b


def _boxedrefl_star() -> DerivationBuilder:
    b = DerivationBuilder(Variant.LPLTL_STAR)
    b.axiom("G ([x]_1 P -> P)", AxiomName.BoxedReflexivity)
    return b


def _star_chain() -> DerivationBuilder:
    b = DerivationBuilder(Variant.LPLTL_STAR)
    k = parse_formula("P -> P")
    b.cs_star(schematic_name(k, 1), (1, 2), k)
    return b


def _star_refl() -> DerivationBuilder:
    b = DerivationBuilder(Variant.LPLTL_STAR)
    k = parse_formula("P -> P")
    c = schematic_name(k, 1)
    chain = b.cs_star(c, (1, 1), k)
    inner = b.formula(chain)
    refl = b.axiom(Implies(inner, inner.body), AxiomName.Reflexivity)
    b.mp(chain, refl)
    return b


def _mix_star() -> DerivationBuilder:
    b = DerivationBuilder(Variant.LPLTL_STAR)
    b.axiom("G P -> X P", AxiomName.Mix)
    return b


def _generalize_g() -> DerivationBuilder:
    b = DerivationBuilder(Variant.LPLTL_G)
    b.axiom("G [x]_1 P -> [up x]_1 G P", AxiomName.Generalize)
    return b


def _icn_g() -> DerivationBuilder:
    b = DerivationBuilder(Variant.LPLTL_G)
    k = parse_formula("P -> P")
    b.icn(schematic_name(k, 1), (1, 2), k)
    return b


def _box_next_g() -> DerivationBuilder:
    b = DerivationBuilder(Variant.LPLTL_G)
    t = b.taut("P -> P")
    b.nec_next(b.nec_box(t))
    return b


def _builders():
    p = parse_formula("P")

    def mix1() -> DerivationBuilder:
        b = DerivationBuilder()
        add_mix1(b, p)
        return b

    def box_elim() -> DerivationBuilder:
        b = DerivationBuilder()
        add_box_elim(b, p)
        return b

    return [
        ("mix1", mix1),
        ("until-refl", _until_refl),
        ("box-elim", box_elim),
        ("nec-next-taut", _nec_next_taut),
        ("nec-box-taut", _nec_box_taut),
        ("nested-box", _nested_box),
        ("box-and-left", _box_and_left),
        ("next-and-left", _next_and_left),
        ("fun-contra", _fun_contra),
        ("until-intro", _until_intro),
        ("introspect-refl", _introspect_refl),
        ("sum-chain", _sum_chain),
        ("app-cs", _app_cs),
        ("cs-taut", _cs_taut),
        ("mix-derived", _mix_derived),
        ("boxedrefl-star", _boxedrefl_star),
        ("star-chain", _star_chain),
        ("star-refl", _star_refl),
        ("mix-star", _mix_star),
        ("generalize-g", _generalize_g),
        ("icn-g", _icn_g),
        ("box-next-g", _box_next_g),
    ]


def theorem_corpus() -> list[tuple[str, Derivation, Variant]]:
    out = []
    for name, make in _builders():
        d = make().build()
        out.append((name, d, d.variant))
    return out


def corpus_entry(name: str) -> Derivation:
    for n, d, _ in theorem_corpus():
        if n == name:
            return d
    raise KeyError(name)
