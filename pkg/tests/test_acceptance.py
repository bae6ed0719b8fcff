"""Acceptance criteria, each run at its stated tolerance and time limit.

Every criterion prints one ``PASS``/``FAIL`` line.  The file also runs as a
script: ``python tests/test_acceptance.py``.
"""

import random
import sys
import time
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from evidence_oracle import naive_evidence, random_evidence_case, subterm_closure  # noqa: E402
from lpltl.canon import decide  # noqa: E402
from lpltl.corpus import corpus_entry, theorem_corpus  # noqa: E402
from lpltl.generate import FormulaShape, SystemShape, random_formula, random_system  # noqa: E402
from lpltl.internalize import eliminate_necessitation, internalize, internalize_g  # noqa: E402
from lpltl.proof import (  # noqa: E402
    DerivationBuilder,
    FiniteCS,
    SchematicCS,
    check_derivation,
    schematic_name,
    star_chain,
)
from lpltl.semantics import EvidenceOracle, InterpretedSystem, brute_eval, validate_system  # noqa: E402
from lpltl.syntax import (  # noqa: E402
    App,
    Bang,
    Const,
    Implies,
    Just,
    Sum,
    Up,
    Variant,
    box,
    neg,
    parse_formula,
    subformulas,
    unstar,
)

L, S, G = Variant.LPLTL, Variant.LPLTL_STAR, Variant.LPLTL_G
SAT_CS = FiniteCS(frozenset({("c", 1, parse_formula("P -> P"))}))

SAT_SUITE = [
    ("[x]_1 P", None),
    ("F P & G (P -> X P)", None),
    ("[c]_1 (P -> P)", SAT_CS),
    ("P", None),
    ("P & ~Q", None),
    ("X P & ~P", None),
    ("P U Q", None),
    ("~Q & (P U Q)", None),
    ("G F P", None),
    ("G F P & G F ~P", None),
    ("F G ~P & P", None),
    ("~[x]_1 P & P", None),
    ("[x]_1 P & ~[x]_2 P", None),
    ("[x]_1 P & [x1]_1 (P -> Q)", None),
    ("[x . x1]_2 Q", None),
    ("[!x]_1 [x]_1 P", None),
    ("[x + x1]_1 P & ~Q", None),
    ("G [x]_1 P & F ~Q", None),
    ("X X P & G (P -> X ~P)", None),
    ("(P U Q) & G ~Q -> false | [x]_1 X P", None),
]


def report(number, title, ok, elapsed, limit, detail=""):
    status = "PASS" if ok and elapsed < limit else "FAIL"
    extra = f"; {detail}" if detail else ""
    print(f"{status} criterion {number}: {title} ({elapsed:.2f}s < {limit}s{extra})")
    return status == "PASS"


@pytest.fixture
def show(capsys):
    def emit(*args, **kwargs):
        with capsys.disabled():
            print()
            return report(*args, **kwargs)

    return emit


def criterion_corpus():
    t0 = time.perf_counter()
    corpus = theorem_corpus()
    ok = all(check_derivation(d, SchematicCS(v)).ok for _, d, v in corpus)
    names = {name for name, _, _ in corpus}
    ok &= corpus_entry("mix1").conclusion == parse_formula("G P -> (P & X G P)")
    ok &= "until-refl" in names and len(corpus) >= 12
    return ok, time.perf_counter() - t0, f"{len(corpus)} derivations"


def criterion_soundness():
    rng = random.Random(2024)
    t0 = time.perf_counter()
    theorems = [(d.conclusion, v) for _, d, v in theorem_corpus() if v is not G]
    bad = 0
    for _ in range(200):
        for variant in (L, S):
            sys_ = random_system(rng, SystemShape(), variant)
            assert validate_system(sys_).ok
            for f, v in theorems:
                if v is S and variant is L:
                    continue
                bad += sum(
                    not sys_.truth(k, n, f) for k, r in enumerate(sys_.runs) for n in r.positions()
                )
    return bad == 0, time.perf_counter() - t0, f"{bad} counterexamples"


def criterion_differential():
    rng = random.Random(99)
    t0 = time.perf_counter()
    disagree = 0
    for _ in range(1000):
        sys_ = random_system(rng)
        f = random_formula(rng, FormulaShape(depth=5, agents=sys_.agents))
        for k, r in enumerate(sys_.runs):
            for n in r.positions():
                disagree += sys_.truth(k, n, f) != brute_eval(sys_, k, n, f)
    return disagree == 0, time.perf_counter() - t0, f"{disagree} disagreements"


def closure_violations(orc, frame, variant, agents, cs_entries, terms):
    bad = 0
    for i in range(1, agents + 1):
        for w in frame.states:
            for t in terms:
                ev = orc.evidence(i, w, t)
                bad += sum(not ev <= orc.evidence(i, v, t) for v in frame.successors(i, w))
                for f in ev:
                    bad += not orc.member(i, w, Bang(t), Just(t, i, f))
                    bad += not orc.member(i, w, Sum(t, Const("c")), f)
                    bad += not orc.member(i, w, Sum(Const("c"), t), f)
                    if isinstance(f, Implies):
                        bad += sum(
                            not orc.member(i, w, App(t, s), f.right)
                            for s in terms
                            if orc.member(i, w, s, f.left)
                        )
                if isinstance(t, Const):
                    bad += sum(not orc.member(i, w, t, g) for c, j, g in cs_entries if c == t.name and j == i)
                base, n = unstar(t)
                if variant is S and n >= 1 and isinstance(base, Const):
                    for c, i0, g in cs_entries:
                        if c == base.name:
                            chain = box(star_chain(c, (i0,) + (1,) * (n - 1), g))
                            bad += not orc.member(i, w, t, chain)
    return bad


def criterion_evidence():
    rng = random.Random(4)
    t0 = time.perf_counter()
    bad = 0
    for _ in range(100):
        frame, seed, cs_entries, variant, agents, pool = random_evidence_case(rng)
        orc = EvidenceOracle(frame, seed, FiniteCS(frozenset(cs_entries)), variant, agents)
        ref = naive_evidence(frame, seed, cs_entries, variant, agents, pool)
        bad += sum(orc.evidence(i, w, t) != fs for (i, w, t), fs in ref.items())
        bad += closure_violations(orc, frame, variant, agents, cs_entries, subterm_closure(pool))
    return bad == 0, time.perf_counter() - t0, f"{bad} violations"


def suite_certificates():
    for text, cs in SAT_SUITE:
        chi = parse_formula(text)
        yield chi, decide(chi, cs)


def criterion_satisfiability():
    t0 = time.perf_counter()
    failures = []
    for chi, cert in suite_certificates():
        if not (cert.sat and cert.system.truth(cert.run, cert.position, chi)):
            failures.append(str(chi))
    for name, d, v in theorem_corpus():
        if v is not G and decide(neg(d.conclusion), variant=v).status != "NOMODEL":
            failures.append(name)
    if decide(parse_formula("P & ~(P U P)")).status != "NOMODEL":
        failures.append("P & ~(P U P)")
    return not failures, time.perf_counter() - t0, f"{len(SAT_SUITE)} SAT, failures: {failures or 'none'}"


def criterion_round_trip():
    t0 = time.perf_counter()
    passed = total = 0
    for name, d, v in theorem_corpus():
        for agent in (1, 2):
            total += 1
            if v is G:
                res, target = internalize_g(d, agent), G
            else:
                res, target = internalize(eliminate_necessitation(d) if v is L else d, agent), S
            passed += (
                res.derivation.conclusion == Just(res.term, agent, d.conclusion)
                and check_derivation(res.derivation, SchematicCS(target)).ok
            )
    return passed == total, time.perf_counter() - t0, f"{passed}/{total}"


def criterion_g_shapes():
    t0 = time.perf_counter()
    a = parse_formula("P -> P")
    c = Const(schematic_name(a, 1))
    nb = DerivationBuilder(G)
    nb.nec_box(nb.taut(a))
    nx = DerivationBuilder(G)
    nx.nec_next(nx.taut(a))
    box_res = internalize_g(nb.build(), 1)
    next_res = internalize_g(nx.build(), 1)
    mix = Const(schematic_name(parse_formula("G (P -> P) -> X (P -> P)"), 1))
    ok = box_res.term == Up(c) and next_res.term == App(mix, Up(c))
    ok &= all(check_derivation(r.derivation, SchematicCS(G)).ok for r in (box_res, next_res))
    return ok, time.perf_counter() - t0, "NECG gives up s, NECX gives c . up s"


def criterion_conservativity():
    rng = random.Random(8)
    t0 = time.perf_counter()
    checked = changed = 0
    while checked < 50:
        sys_ = random_system(rng, SystemShape(), L)
        star = InterpretedSystem(
            sys_.frame, sys_.runs, sys_.valuation, sys_.seed, SchematicCS(S), S, sys_.agents
        )
        f = random_formula(rng, FormulaShape(depth=4, agents=sys_.agents))
        points = [(k, n) for k, r in enumerate(sys_.runs) for n in r.positions() if sys_.truth(k, n, f)]
        if not points:
            continue
        checked += 1
        changed += sum(not star.truth(k, n, f) for k, n in points)
    return changed == 0, time.perf_counter() - t0, f"{checked} formulas, {changed} changed"


def criterion_finiteness():
    t0 = time.perf_counter()
    bad = []
    for chi, cert in suite_certificates():
        if not (len(cert.system.states) <= 2 ** len(subformulas(chi)) and validate_system(cert.system).ok):
            bad.append(str(chi))
    return not bad, time.perf_counter() - t0, f"violations: {bad or 'none'}"


CRITERIA = [
    (1, "corpus checks under schematic CS", criterion_corpus, 1),
    (2, "soundness on 200 random systems", criterion_soundness, 60),
    (3, "eval agrees with brute_eval on 1000 pairs", criterion_differential, 60),
    (4, "evidence closure on 100 seeds", criterion_evidence, 30),
    (5, "decide SAT suite and NOMODEL negations", criterion_satisfiability, 120),
    (6, "internalization round trip", criterion_round_trip, 30),
    (7, "internalization shapes with generalization", criterion_g_shapes, 5),
    (8, "star extension preserves star-free truth", criterion_conservativity, 30),
    (9, "canonical extraction is finite and valid", criterion_finiteness, 60),
]


@pytest.mark.acceptance
@pytest.mark.parametrize("number,title,check,limit", CRITERIA, ids=[f"criterion-{c[0]}" for c in CRITERIA])
def test_criterion(number, title, check, limit, show):
    ok, elapsed, detail = check()
    assert show(number, title, ok, elapsed, limit, detail)


if __name__ == "__main__":
    results = []
    for n, title, check, limit in CRITERIA:
        ok, elapsed, detail = check()
        results.append(report(n, title, ok, elapsed, limit, detail))
    sys.exit(0 if all(results) else 1)
