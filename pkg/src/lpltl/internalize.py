"""Turning derivations into justification terms.

``eliminate_necessitation`` rewrites an LPLTL derivation into the star
variant, replacing both necessitation rules by axiom necessitation along
star chains.  ``internalize`` then compiles a star-variant derivation of a
formula into a term ``t`` together with a derivation of ``[t]_i`` of that
formula.  ``internalize_g`` does the same for LPLTL^G, where necessitation
stays and the generalize axiom carries evidence under the box.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .corpus import add_box_elim
from .proof import (
    AxNec,
    AxNecStar,
    Axiom,
    AxiomName,
    ConstantSpec,
    Derivation,
    DerivationBuilder,
    IterConstNec,
    MP,
    NecBox,
    NecNext,
    NotAxAppropriate,
    SchematicCS,
)
from .syntax import (
    App,
    Const,
    Formula,
    Implies,
    Just,
    Next,
    Term,
    Up,
    Variant,
    VariantError,
    box,
    star_n,
    unbox,
)


@dataclass
class InternalizationResult:
    term: Term
    derivation: Derivation
    trace: dict[int, Term] = field(default_factory=dict)


def _constant(cs: ConstantSpec, f: Formula, agent: int) -> str:
    c = cs.constant_for(f, agent)
    if c is None:
        raise NotAxAppropriate(f"no constant for agent {agent} justifies the axiom")
    return c


def _ancestors(d: Derivation) -> list[int]:
    """Indices of the lines the conclusion depends on, ascending."""
    by_index = {ln.index: ln for ln in d.lines}
    need = {d.lines[-1].index}
    stack = [d.lines[-1].index]
    while stack:
        ln = by_index[stack.pop()]
        j = ln.just
        refs = ()
        if isinstance(j, MP):
            refs = (j.minor, j.major)
        elif isinstance(j, (NecNext, NecBox)):
            refs = (j.premise,)
        for r in refs:
            if r not in need:
                need.add(r)
                stack.append(r)
    return sorted(need)


# ---------------------------------------------------------------------------
# Necessitation elimination


class _BoxLifter:
    """Derives the box of output lines, which use only axioms, MP and axiom necessitation."""

    def __init__(self, b: DerivationBuilder, cs: ConstantSpec, agent: int = 1):
        self.b = b
        self.cs = cs
        self.agent = agent
        self.memo: dict[int, int] = {}

    def lift(self, k: int) -> int:
        pending = []
        stack = [k]
        seen = set()
        while stack:
            n = stack.pop()
            if n in self.memo or n in seen:
                continue
            seen.add(n)
            pending.append(n)
            j = self.b.lines[n - 1].just
            if isinstance(j, MP):
                stack.extend((j.minor, j.major))
        for n in sorted(pending):
            self.memo[n] = self._lift_one(n)
        return self.memo[k]

    def _lift_one(self, n: int) -> int:
        b = self.b
        line = b.lines[n - 1]
        f, j = line.formula, line.just
        if isinstance(j, Axiom):
            c = _constant(self.cs, f, self.agent)
            inner = Just(Const(c), self.agent, f)
            chain = b.add(Just(star_n(Const(c), 1), self.agent, box(inner)), AxNecStar(1, c, (self.agent, self.agent)))
            refl = b.axiom(Implies(b.formula(chain), box(inner)), AxiomName.Reflexivity)
            boxed_inner = b.mp(chain, refl)
            boxed_refl = b.axiom(box(Implies(inner, f)), AxiomName.BoxedReflexivity)
            k = b.axiom(Implies(box(Implies(inner, f)), Implies(box(inner), box(f))), AxiomName.BoxK)
            return b.mp(boxed_inner, b.mp(boxed_refl, k))
        if isinstance(j, AxNecStar):
            agents = (*j.agents, self.agent)
            chain = b.add(Just(star_n(Const(j.const), j.n + 1), self.agent, box(f)), AxNecStar(j.n + 1, j.const, agents))
            refl = b.axiom(Implies(b.formula(chain), box(f)), AxiomName.Reflexivity)
            return b.mp(chain, refl)
        if isinstance(j, MP):
            minor, major = self.memo[j.minor], self.memo[j.major]
            imp = b.lines[j.major - 1].formula
            k = b.axiom(Implies(box(imp), Implies(box(imp.left), box(imp.right))), AxiomName.BoxK)
            return b.mp(minor, b.mp(major, k))
        raise VariantError(f"cannot box line {n}: {type(j).__name__}")


def eliminate_necessitation(d: Derivation, cs: ConstantSpec | None = None) -> Derivation:
    """An LPLTL* derivation of the same formula without necessitation rules."""
    cs = SchematicCS(Variant.LPLTL_STAR) if cs is None else cs
    b = DerivationBuilder(Variant.LPLTL_STAR, d.agents)
    lifter = _BoxLifter(b, cs)
    where: dict[int, int] = {}
    for ln in d.lines:
        j = ln.just
        if isinstance(j, (Axiom, AxNecStar)):
            if isinstance(j, Axiom) and j.name is AxiomName.Taut:
                where[ln.index] = b.taut(ln.formula)
            else:
                where[ln.index] = b.add(ln.formula, j)
        elif isinstance(j, MP):
            where[ln.index] = b.add(ln.formula, MP(where[j.minor], where[j.major]))
        elif isinstance(j, NecBox):
            where[ln.index] = lifter.lift(where[j.premise])
        elif isinstance(j, NecNext):
            boxed = lifter.lift(where[j.premise])
            body = b.formula(where[j.premise])
            mix = b.axiom(Implies(box(body), Next(body)), AxiomName.Mix)
            where[ln.index] = b.mp(boxed, mix)
        else:
            raise VariantError(f"line {ln.index}: {type(j).__name__} is not an LPLTL rule")
    final = where[d.lines[-1].index]
    if final != len(b.lines):
        _repeat(b, final)
    return b.build()


def _repeat(b: DerivationBuilder, k: int) -> int:
    """Re-derive line ``k`` as the last line via a tautology and MP."""
    f = b.formula(k)
    t = b.taut(Implies(f, f))
    return b.mp(k, t)


# ---------------------------------------------------------------------------
# Internalization


class _Internalizer:
    def __init__(self, variant: Variant, agents: int, agent: int, cs: ConstantSpec):
        self.b = DerivationBuilder(variant, agents)
        self.variant = variant
        self.agent = agent
        self.cs = cs
        self.box_elim: dict[Formula, tuple[Term, int]] = {}

    def application(self, s1: Term, l1: int, s2: Term, l2: int) -> tuple[Term, int]:
        """From [s1](A -> B) at l1 and [s2]A at l2 derive [s1 . s2]B."""
        b, i = self.b, self.agent
        imp = b.formula(l1).body
        t = App(s1, s2)
        ax = b.axiom(
            Implies(b.formula(l1), Implies(b.formula(l2), Just(t, i, imp.right))),
            AxiomName.Application,
        )
        return t, b.mp(l2, b.mp(l1, ax))

    def axiom_line(self, f: Formula) -> tuple[Term, int]:
        c = _constant(self.cs, f, self.agent)
        return Const(c), self.b.add(Just(Const(c), self.agent, f), AxNec(c, self.agent))

    def run(self, d: Derivation) -> tuple[Term, int, dict[int, Term]]:
        done: dict[int, tuple[Term, int]] = {}
        by_index = {ln.index: ln for ln in d.lines}
        for n in _ancestors(d):
            done[n] = self.step(by_index[n], done)
        final = d.lines[-1].index
        return done[final][0], done[final][1], {k: v[0] for k, v in done.items()}

    def step(self, ln, done: dict[int, tuple[Term, int]]) -> tuple[Term, int]:
        j, f = ln.just, ln.formula
        b, i = self.b, self.agent
        if isinstance(j, Axiom):
            return self.axiom_line(f)
        if isinstance(j, MP):
            s1, l1 = done[j.major]
            s2, l2 = done[j.minor]
            return self.application(s1, l1, s2, l2)
        if isinstance(j, AxNecStar) and self.variant is Variant.LPLTL_STAR:
            agents = (*j.agents, i)
            star = star_n(Const(j.const), j.n + 1)
            chain = b.add(Just(star, i, box(f)), AxNecStar(j.n + 1, j.const, agents))
            u, lu = self.internalized_box_elim(f)
            return self.application(u, lu, star, chain)
        if isinstance(j, (AxNecStar, IterConstNec)) and self.variant is Variant.LPLTL_G:
            agents = (*j.agents, i)
            star = star_n(Const(j.const), j.n + 1)
            return star, b.add(Just(star, i, f), IterConstNec(j.n + 1, j.const, agents))
        if isinstance(j, (NecBox, NecNext)) and self.variant is Variant.LPLTL_G:
            psi = unbox(f) if isinstance(j, NecBox) else f.arg
            s, ls = done[j.premise]
            boxed = b.nec_box(ls)
            gen = b.axiom(Implies(b.formula(boxed), Just(Up(s), i, box(psi))), AxiomName.Generalize)
            lg = b.mp(boxed, gen)
            if isinstance(j, NecBox):
                return Up(s), lg
            c, lc = self.axiom_line(Implies(box(psi), Next(psi)))
            return self.application(c, lc, Up(s), lg)
        raise VariantError(f"line {ln.index}: {type(j).__name__} cannot be internalized in {self.variant.value}")

    def internalized_box_elim(self, f: Formula) -> tuple[Term, int]:
        got = self.box_elim.get(f)
        if got is None:
            sub = DerivationBuilder(self.variant, self.b.agents)
            add_box_elim(sub, f)
            done: dict[int, tuple[Term, int]] = {}
            for ln in sub.lines:
                done[ln.index] = self.step(ln, done)
            got = done[len(sub.lines)]
            self.box_elim[f] = got
        return got


def _finish(it: _Internalizer, term: Term, line: int, trace: dict[int, Term]) -> InternalizationResult:
    b = it.b
    if line != len(b.lines):
        line = _repeat(b, line)
    return InternalizationResult(term, b.build(), trace)


def internalize(d: Derivation, agent: int, cs: ConstantSpec | None = None) -> InternalizationResult:
    """Compile an LPLTL* derivation of phi into a term t and a derivation of [t]_agent phi."""
    for ln in d.lines:
        if isinstance(ln.just, (NecBox, NecNext)):
            raise VariantError(f"line {ln.index} uses necessitation; eliminate it first")
        if isinstance(ln.just, IterConstNec):
            raise VariantError(f"line {ln.index}: iterated constant necessitation is an LPLTL^G rule")
    if not 1 <= agent <= d.agents:
        raise VariantError(f"agent {agent} outside 1..{d.agents}")
    cs = SchematicCS(Variant.LPLTL_STAR) if cs is None else cs
    it = _Internalizer(Variant.LPLTL_STAR, d.agents, agent, cs)
    return _finish(it, *it.run(d))


def internalize_g(d: Derivation, agent: int, cs: ConstantSpec | None = None) -> InternalizationResult:
    """Internalization for LPLTL^G, keeping necessitation and using generalize."""
    if not 1 <= agent <= d.agents:
        raise VariantError(f"agent {agent} outside 1..{d.agents}")
    for ln in d.lines:
        if isinstance(ln.just, AxNecStar) and ln.just.n > 0:
            raise VariantError(f"line {ln.index}: axiom necessitation along star chains is an LPLTL* rule")
    cs = SchematicCS(Variant.LPLTL_G) if cs is None else cs
    it = _Internalizer(Variant.LPLTL_G, d.agents, agent, cs)
    return _finish(it, *it.run(d))
