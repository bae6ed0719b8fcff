"""Hilbert-style derivations and their checker.

Three systems share one checker: the base logic (``Variant.LPLTL``), the
star extension (``Variant.LPLTL_STAR``), which trades the necessitation rules
for iterated axiom necessitation, and the generalize extension
(``Variant.LPLTL_G``).
"""

from __future__ import annotations

import enum
import functools
import hashlib
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Union

from .syntax import (
    App,
    Bang,
    Bottom,
    Const,
    Down,
    Formula,
    Implies,
    Just,
    LArr,
    LogicError,
    Next,
    RArr,
    Sum,
    Up,
    Until,
    Variant,
    agents_of,
    allowed_term_ops,
    box,
    conj,
    diamond,
    disj,
    formula_operators,
    neg,
    parse_formula,
    print_formula,
    star_n,
    unbox,
    uniff,
    unneg,
    unstar,
)

TAUT_ATOM_CAP = 20


class TautologyTooLarge(LogicError):
    pass


class ProofFormatError(LogicError):
    def __init__(self, message: str, line: int | None = None, source: str | None = None):
        self.line = line
        where = ""
        if source or line is not None:
            where = f"{source or '<input>'}:{line if line is not None else '?'}: "
        super().__init__(where + message)


class NotAxAppropriate(LogicError):
    pass


class AxiomName(enum.Enum):
    Taut = "taut"
    NextK = "next-k"
    BoxK = "box-k"
    Fun = "fun"
    Ind = "ind"
    Until1 = "U1"
    Until2 = "U2"
    Application = "application"
    Sum = "sum"
    Reflexivity = "reflexivity"
    PositiveIntrospection = "positive-introspection"
    Mix = "mix"
    BoxedReflexivity = "boxed-reflexivity"
    BoxAccess = "box-access"
    Generalize = "generalize"
    NextAccess = "next-access"
    NextLeft = "next-left"

    @classmethod
    def parse(cls, text: str) -> "AxiomName":
        key = text.strip().lower()
        for a in cls:
            if key in (a.value.lower(), a.name.lower()):
                return a
        raise ValueError(f"unknown axiom {text!r}")


_BASE_AXIOMS = frozenset(
    {
        AxiomName.Taut,
        AxiomName.NextK,
        AxiomName.BoxK,
        AxiomName.Fun,
        AxiomName.Ind,
        AxiomName.Until1,
        AxiomName.Until2,
        AxiomName.Application,
        AxiomName.Sum,
        AxiomName.Reflexivity,
        AxiomName.PositiveIntrospection,
    }
)
_EXPERIMENTAL = frozenset(
    {AxiomName.BoxAccess, AxiomName.Generalize, AxiomName.NextAccess, AxiomName.NextLeft}
)


def enabled_axioms(variant: Variant, experimental: bool = False) -> frozenset[AxiomName]:
    out = set(_BASE_AXIOMS)
    if variant is Variant.LPLTL_STAR:
        out |= {AxiomName.Mix, AxiomName.BoxedReflexivity}
    elif variant is Variant.LPLTL_G:
        out |= {AxiomName.Mix, AxiomName.Generalize}
    if experimental:
        out |= _EXPERIMENTAL
    return frozenset(out)


# ---------------------------------------------------------------------------
# Propositional tautologies over opaque atoms


def opaque_atoms(f: Formula) -> list[Formula]:
    """Maximal non-propositional subformulas, in first-occurrence order."""
    seen: dict[Formula, None] = {}
    stack = [f]
    while stack:
        g = stack.pop()
        if isinstance(g, Implies):
            stack.append(g.right)
            stack.append(g.left)
        elif not isinstance(g, Bottom):
            seen.setdefault(g)
    return list(seen)


def truth_table(f: Formula, cap: int = TAUT_ATOM_CAP) -> tuple[int, int]:
    """Evaluate ``f`` on all rows at once.

    Returns ``(bits, n_atoms)``: bit ``r`` of ``bits`` is the value of ``f`` on
    row ``r``, where atom ``k`` is true on row ``r`` iff bit ``k`` of ``r`` is set.
    """
    atoms = opaque_atoms(f)
    n = len(atoms)
    if n > cap:
        raise TautologyTooLarge(f"{n} opaque atoms exceeds the cap of {cap}")
    rows = 1 << n
    full = (1 << rows) - 1
    columns: dict[Formula, int] = {}
    for k, a in enumerate(atoms):
        block = 1 << k
        unit = ((1 << block) - 1) << block
        columns[a] = unit * (full // ((1 << (2 * block)) - 1))

    @functools.lru_cache(maxsize=None)
    def ev(g: Formula) -> int:
        if isinstance(g, Bottom):
            return 0
        if isinstance(g, Implies):
            return (~ev(g.left) | ev(g.right)) & full
        return columns[g]

    return ev(f), n


def is_tautology(f: Formula, cap: int = TAUT_ATOM_CAP) -> bool:
    bits, n = truth_table(f, cap)
    return bits == (1 << (1 << n)) - 1


# ---------------------------------------------------------------------------
# Axiom schemas


def _is_next_k(f: Formula) -> bool:
    if isinstance(f, Implies) and isinstance(f.left, Next) and isinstance(f.left.arg, Implies):
        a, b = f.left.arg.left, f.left.arg.right
        return f.right == Implies(Next(a), Next(b))
    return False


def _is_box_k(f: Formula) -> bool:
    if isinstance(f, Implies):
        ab = unbox(f.left)
        if isinstance(ab, Implies):
            return f.right == Implies(box(ab.left), box(ab.right))
    return False


def _is_fun(f: Formula) -> bool:
    parts = uniff(f)
    if parts is None:
        return False
    lhs, rhs = parts
    if isinstance(lhs, Next):
        inner = unneg(lhs.arg)
        return inner is not None and rhs == neg(Next(inner))
    return False


def _is_ind(f: Formula) -> bool:
    if isinstance(f, Implies):
        body = unbox(f.left)
        if isinstance(body, Implies) and body.right == Next(body.left):
            a = body.left
            return f.right == Implies(a, box(a))
    return False


def _is_until1(f: Formula) -> bool:
    return (
        isinstance(f, Implies)
        and isinstance(f.left, Until)
        and f.right == diamond(f.left.right)
    )


def _is_until2(f: Formula) -> bool:
    parts = uniff(f)
    if parts is None:
        return False
    u, rhs = parts
    if isinstance(u, Until):
        return rhs == disj(u.right, conj(u.left, Next(u)))
    return False


def _is_application(f: Formula) -> bool:
    if not (isinstance(f, Implies) and isinstance(f.left, Just) and isinstance(f.right, Implies)):
        return False
    jt, rest = f.left, f.right
    if not (isinstance(jt.body, Implies) and isinstance(rest.left, Just)):
        return False
    js = rest.left
    return (
        js.agent == jt.agent
        and js.body == jt.body.left
        and rest.right == Just(App(jt.term, js.term), jt.agent, jt.body.right)
    )


def _is_sum(f: Formula) -> bool:
    if isinstance(f, Implies) and isinstance(f.left, Just) and isinstance(f.right, Just):
        l, r = f.left, f.right
        return (
            isinstance(r.term, Sum)
            and l.agent == r.agent
            and l.body == r.body
            and l.term in (r.term.left, r.term.right)
        )
    return False


def _is_reflexivity(f: Formula) -> bool:
    return isinstance(f, Implies) and isinstance(f.left, Just) and f.left.body == f.right


def _is_positive_introspection(f: Formula) -> bool:
    if isinstance(f, Implies) and isinstance(f.left, Just):
        j = f.left
        return f.right == Just(Bang(j.term), j.agent, j)
    return False


def _is_mix(f: Formula) -> bool:
    if isinstance(f, Implies):
        a = unbox(f.left)
        return a is not None and f.right == Next(a)
    return False


def _is_boxed_reflexivity(f: Formula) -> bool:
    body = unbox(f)
    return body is not None and _is_reflexivity(body)


def _is_box_access(f: Formula) -> bool:
    if isinstance(f, Implies) and isinstance(f.left, Just):
        j = f.left
        a = unbox(j.body)
        return a is not None and f.right == box(Just(Down(j.term), j.agent, a))
    return False


def _is_generalize(f: Formula) -> bool:
    if isinstance(f, Implies):
        j = unbox(f.left)
        if isinstance(j, Just):
            return f.right == Just(Up(j.term), j.agent, box(j.body))
    return False


def _is_next_access(f: Formula) -> bool:
    if isinstance(f, Implies) and isinstance(f.left, Just) and isinstance(f.left.body, Next):
        j = f.left
        return f.right == Next(Just(RArr(j.term), j.agent, j.body.arg))
    return False


def _is_next_left(f: Formula) -> bool:
    if isinstance(f, Implies) and isinstance(f.left, Next) and isinstance(f.left.arg, Just):
        j = f.left.arg
        return f.right == Just(LArr(j.term), j.agent, Next(j.body))
    return False


_MATCHERS = {
    AxiomName.Taut: is_tautology,
    AxiomName.NextK: _is_next_k,
    AxiomName.BoxK: _is_box_k,
    AxiomName.Fun: _is_fun,
    AxiomName.Ind: _is_ind,
    AxiomName.Until1: _is_until1,
    AxiomName.Until2: _is_until2,
    AxiomName.Application: _is_application,
    AxiomName.Sum: _is_sum,
    AxiomName.Reflexivity: _is_reflexivity,
    AxiomName.PositiveIntrospection: _is_positive_introspection,
    AxiomName.Mix: _is_mix,
    AxiomName.BoxedReflexivity: _is_boxed_reflexivity,
    AxiomName.BoxAccess: _is_box_access,
    AxiomName.Generalize: _is_generalize,
    AxiomName.NextAccess: _is_next_access,
    AxiomName.NextLeft: _is_next_left,
}


@functools.lru_cache(maxsize=65536)
def match_axiom(f: Formula, variant: Variant, experimental: bool = False) -> frozenset[AxiomName]:
    """All axiom schemas enabled in ``variant`` of which ``f`` is an instance."""
    if formula_operators(f) - allowed_term_ops(variant, experimental):
        return frozenset()
    return frozenset(
        a for a in enabled_axioms(variant, experimental) if _MATCHERS[a](f)
    )


def is_axiom(f: Formula, variant: Variant, experimental: bool = False) -> bool:
    return bool(match_axiom(f, variant, experimental))


def is_schema_instance(f: Formula, variant: Variant, experimental: bool = False) -> bool:
    """Like ``is_axiom`` but ignoring the propositional tautology schema."""
    if formula_operators(f) - allowed_term_ops(variant, experimental):
        return False
    return any(
        _MATCHERS[a](f) for a in enabled_axioms(variant, experimental) if a is not AxiomName.Taut
    )


# ---------------------------------------------------------------------------
# Constant specifications

# name -> (agent, axiom); content-addressed, so safe to share process-wide
_SCHEMATIC_NAMES: dict[str, tuple[int, Formula]] = {}


def schematic_name(f: Formula, agent: int) -> str:
    digest = hashlib.sha256(f"{print_formula(f)}|{agent}".encode()).hexdigest()[:12]
    name = "c_" + digest
    _SCHEMATIC_NAMES[name] = (agent, f)
    return name


@dataclass(frozen=True)
class FiniteCS:
    entries: frozenset[tuple[str, int, Formula]] = frozenset()

    is_schematic = False

    def contains(self, c: str, agent: int, f: Formula) -> bool:
        return (c, agent, f) in self.entries

    def formulas_for(self, c: str, agent: int) -> list[Formula]:
        return [f for (d, i, f) in self.entries if d == c and i == agent]

    def constant_for(self, f: Formula, agent: int) -> str | None:
        names = sorted(c for (c, i, g) in self.entries if i == agent and g == f)
        return names[0] if names else None

    def restrict(self) -> "FiniteCS":
        return FiniteCS(
            frozenset(e for e in self.entries if is_axiom(e[2], Variant.LPLTL))
        )

    def invalid_entries(self, variant: Variant, experimental: bool = False) -> list[tuple[str, int, Formula]]:
        return sorted(
            (e for e in self.entries if not is_axiom(e[2], variant, experimental)),
            key=lambda e: (e[0], e[1], print_formula(e[2])),
        )


@dataclass(frozen=True)
class SchematicCS:
    """Every axiom of ``variant`` for every agent, named by content hash."""

    variant: Variant = Variant.LPLTL_STAR
    experimental: bool = False

    is_schematic = True

    def contains(self, c: str, agent: int, f: Formula) -> bool:
        return is_axiom(f, self.variant, self.experimental) and c == schematic_name(f, agent)

    def formulas_for(self, c: str, agent: int) -> list[Formula]:
        entry = _SCHEMATIC_NAMES.get(c)
        if entry is None or entry[0] != agent:
            return []
        if not is_axiom(entry[1], self.variant, self.experimental):
            return []
        return [entry[1]]

    def constant_for(self, f: Formula, agent: int) -> str | None:
        if is_axiom(f, self.variant, self.experimental):
            return schematic_name(f, agent)
        return None

    def restrict(self) -> "SchematicCS":
        return SchematicCS(Variant.LPLTL, self.experimental)


ConstantSpec = Union[FiniteCS, SchematicCS]


def cs_lookup(cs: ConstantSpec, c: str, agent: int, f: Formula) -> bool:
    return cs.contains(c, agent, f)


def cs_restrict(cs: ConstantSpec) -> ConstantSpec:
    return cs.restrict()


# ---------------------------------------------------------------------------
# Derivations


@dataclass(frozen=True)
class Axiom:
    name: AxiomName


@dataclass(frozen=True)
class MP:
    minor: int
    major: int


@dataclass(frozen=True)
class NecNext:
    premise: int


@dataclass(frozen=True)
class NecBox:
    premise: int


@dataclass(frozen=True)
class AxNecStar:
    """Iterated axiom necessitation; ``n == 0`` is plain axiom necessitation."""

    n: int
    const: str
    agents: tuple[int, ...]


@dataclass(frozen=True)
class IterConstNec:
    n: int
    const: str
    agents: tuple[int, ...]


Justification = Union[Axiom, MP, NecNext, NecBox, AxNecStar, IterConstNec]


def AxNec(const: str, agent: int) -> AxNecStar:
    return AxNecStar(0, const, (agent,))


@dataclass(frozen=True)
class Line:
    index: int
    formula: Formula
    just: Justification


@dataclass
class Derivation:
    lines: list[Line]
    variant: Variant = Variant.LPLTL
    agents: int = 2
    cs_ref: str = "schematic"

    @property
    def conclusion(self) -> Formula:
        return self.lines[-1].formula

    def __len__(self) -> int:
        return len(self.lines)

    def line(self, index: int) -> Line:
        for ln in self.lines:
            if ln.index == index:
                return ln
        raise KeyError(index)


def star_chain(const: str, agents: Iterable[int], f: Formula) -> Formula:
    """Conclusion of iterated axiom necessitation for ``[const]_{agents[0]} f``."""
    agents = tuple(agents)
    g: Formula = Just(Const(const), agents[0], f)
    for k in range(1, len(agents)):
        g = Just(star_n(Const(const), k), agents[k], box(g))
    return g


def iter_const_chain(const: str, agents: Iterable[int], f: Formula) -> Formula:
    agents = tuple(agents)
    g: Formula = Just(Const(const), agents[0], f)
    for k in range(1, len(agents)):
        g = Just(star_n(Const(const), k), agents[k], g)
    return g


def _peel_chain(f: Formula, boxed: bool) -> tuple[str, tuple[int, ...], Formula] | None:
    """Invert ``star_chain`` / ``iter_const_chain``: (const, agents, axiom)."""
    agents: list[int] = []
    g = f
    while True:
        if not isinstance(g, Just):
            return None
        base, n = unstar(g.term)
        if not isinstance(base, Const):
            return None
        agents.append(g.agent)
        if n == 0:
            agents.reverse()
            return base.name, tuple(agents), g.body
        inner = unbox(g.body) if boxed else g.body
        if inner is None:
            return None
        g = inner


def peel_chain(f: Formula, boxed: bool = True) -> tuple[str, tuple[int, ...], Formula] | None:
    """Invert ``star_chain`` (or ``iter_const_chain`` when ``boxed`` is false)."""
    peeled = _peel_chain(f, boxed)
    if peeled is None:
        return None
    const, agents, body = peeled
    builder = star_chain if boxed else iter_const_chain
    return peeled if builder(const, agents, body) == f else None


@dataclass
class LineVerdict:
    index: int
    ok: bool
    error: str | None = None
    message: str = ""


@dataclass
class CheckReport:
    verdicts: list[LineVerdict] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(v.ok for v in self.verdicts)

    @property
    def first_failure(self) -> LineVerdict | None:
        for v in self.verdicts:
            if not v.ok:
                return v
        return None

    def summary(self) -> str:
        bad = self.first_failure
        if bad is None:
            return f"ok: {len(self.verdicts)} lines checked"
        return f"line {bad.index}: {bad.error}: {bad.message}"


def _rule_allowed(just: Justification, variant: Variant) -> bool:
    if isinstance(just, (NecNext, NecBox)):
        return variant in (Variant.LPLTL, Variant.LPLTL_G)
    if isinstance(just, AxNecStar):
        return just.n == 0 or variant is Variant.LPLTL_STAR
    if isinstance(just, IterConstNec):
        return variant is Variant.LPLTL_G
    return True


def _check_line(
    ln: Line,
    known: dict[int, Formula],
    cs: ConstantSpec,
    variant: Variant,
    agents: int | None,
    experimental: bool,
) -> LineVerdict:
    f, just = ln.formula, ln.just

    def fail(kind: str, msg: str) -> LineVerdict:
        return LineVerdict(ln.index, False, kind, msg)

    bad_ops = formula_operators(f) - allowed_term_ops(variant, experimental)
    if bad_ops:
        names = sorted(t.__name__ for t in bad_ops)
        return fail("OperatorNotInVariant", f"term operators {names} not in {variant.value}")
    if agents is not None:
        out = [i for i in agents_of(f) if not 1 <= i <= agents]
        if out:
            return fail("AgentOutOfRange", f"agent {out[0]} not in 1..{agents}")
    if not _rule_allowed(just, variant):
        return fail("RuleNotInVariant", f"{type(just).__name__} is not a rule of {variant.value}")

    for ref in _refs(just):
        if ref not in known:
            return fail("BadReference", f"line {ref} does not precede line {ln.index}")

    if isinstance(just, Axiom):
        if just.name not in enabled_axioms(variant, experimental):
            return fail("RuleNotInVariant", f"axiom {just.name.value} not in {variant.value}")
        try:
            matched = match_axiom(f, variant, experimental)
        except TautologyTooLarge as exc:
            return fail("BadAxiomInstance", str(exc))
        if just.name not in matched:
            return fail("BadAxiomInstance", f"not an instance of ({just.name.value})")
        return LineVerdict(ln.index, True)

    if isinstance(just, MP):
        a, b = known[just.minor], known[just.major]
        if b == Implies(a, f) or a == Implies(b, f):
            return LineVerdict(ln.index, True)
        return fail("BadMP", f"lines {just.minor}, {just.major} do not yield this formula by MP")

    if isinstance(just, NecNext):
        if f == Next(known[just.premise]):
            return LineVerdict(ln.index, True)
        return fail("BadNecessitation", f"not X of line {just.premise}")

    if isinstance(just, NecBox):
        if f == box(known[just.premise]):
            return LineVerdict(ln.index, True)
        return fail("BadNecessitation", f"not G of line {just.premise}")

    if isinstance(just, (AxNecStar, IterConstNec)):
        boxed = isinstance(just, AxNecStar)
        if len(just.agents) != just.n + 1:
            return fail("MalformedStarChain", f"expected {just.n + 1} agents, got {len(just.agents)}")
        peeled = peel_chain(f, boxed)
        if peeled is None:
            return fail("MalformedStarChain", "formula does not have the shape of the rule's conclusion")
        const, chain_agents, body = peeled
        if (const, chain_agents) != (just.const, just.agents):
            return fail(
                "MalformedStarChain",
                f"annotation ({just.const}, {just.agents}) disagrees with formula ({const}, {chain_agents})",
            )
        if not cs.contains(const, chain_agents[0], body):
            return fail("NotInCS", f"[{const}]_{chain_agents[0]} {print_formula(body)} is not in CS")
        return LineVerdict(ln.index, True)

    raise TypeError(f"unknown justification {just!r}")


def _refs(just: Justification) -> tuple[int, ...]:
    if isinstance(just, MP):
        return (just.minor, just.major)
    if isinstance(just, (NecNext, NecBox)):
        return (just.premise,)
    return ()


def check_derivation(
    d: Derivation,
    cs: ConstantSpec,
    variant: Variant | None = None,
    agents: int | None = None,
    experimental: bool = False,
) -> CheckReport:
    variant = variant or d.variant
    agents = agents if agents is not None else d.agents
    report = CheckReport()
    known: dict[int, Formula] = {}
    last = None
    for ln in d.lines:
        if last is not None and ln.index <= last:
            report.verdicts.append(
                LineVerdict(ln.index, False, "BadIndex", f"index {ln.index} does not increase")
            )
        else:
            report.verdicts.append(_check_line(ln, known, cs, variant, agents, experimental))
        known[ln.index] = ln.formula
        last = ln.index
    return report


# ---------------------------------------------------------------------------
# Building derivations programmatically

FormulaLike = Union[Formula, str]


class DerivationBuilder:
    """Append-only helper that computes conclusions of rule applications."""

    def __init__(self, variant: Variant = Variant.LPLTL, agents: int = 2):
        self.variant = variant
        self.agents = agents
        self.lines: list[Line] = []

    def _f(self, f: FormulaLike) -> Formula:
        return parse_formula(f, None) if isinstance(f, str) else f

    def add(self, f: FormulaLike, just: Justification) -> int:
        index = len(self.lines) + 1
        self.lines.append(Line(index, self._f(f), just))
        return index

    def formula(self, index: int) -> Formula:
        return self.lines[index - 1].formula

    def axiom(self, f: FormulaLike, name: AxiomName | str) -> int:
        if isinstance(name, str):
            name = AxiomName.parse(name)
        return self.add(f, Axiom(name))

    def taut(self, f: FormulaLike) -> int:
        return self.axiom(f, AxiomName.Taut)

    def mp(self, minor: int, major: int) -> int:
        imp = self.formula(major)
        if not (isinstance(imp, Implies) and imp.left == self.formula(minor)):
            raise ValueError(f"line {major} is not an implication from line {minor}")
        return self.add(imp.right, MP(minor, major))

    def nec_next(self, i: int) -> int:
        return self.add(Next(self.formula(i)), NecNext(i))

    def nec_box(self, i: int) -> int:
        return self.add(box(self.formula(i)), NecBox(i))

    def cs(self, const: str, agent: int, f: FormulaLike) -> int:
        return self.add(Just(Const(const), agent, self._f(f)), AxNec(const, agent))

    def cs_star(self, const: str, agents: Iterable[int], f: FormulaLike) -> int:
        agents = tuple(agents)
        return self.add(star_chain(const, agents, self._f(f)), AxNecStar(len(agents) - 1, const, agents))

    def icn(self, const: str, agents: Iterable[int], f: FormulaLike) -> int:
        agents = tuple(agents)
        return self.add(
            iter_const_chain(const, agents, self._f(f)), IterConstNec(len(agents) - 1, const, agents)
        )

    def build(self) -> Derivation:
        return Derivation(list(self.lines), self.variant, self.agents)


# ---------------------------------------------------------------------------
# Proof and CS files


def format_justification(just: Justification) -> str:
    if isinstance(just, Axiom):
        return "TAUT" if just.name is AxiomName.Taut else f"AX {just.name.value}"
    if isinstance(just, MP):
        return f"MP {just.minor} {just.major}"
    if isinstance(just, NecNext):
        return f"NECX {just.premise}"
    if isinstance(just, NecBox):
        return f"NECG {just.premise}"
    if isinstance(just, AxNecStar):
        if just.n == 0:
            return f"CS {just.const} {just.agents[0]}"
        return f"CSSTAR {just.n} {just.const} {','.join(map(str, just.agents))}"
    if isinstance(just, IterConstNec):
        return f"ICN {just.n} {just.const} {','.join(map(str, just.agents))}"
    raise TypeError(just)


def write_proof(d: Derivation) -> str:
    out = [f"variant: {d.variant.value}", f"agents: {d.agents}", f"cs: {d.cs_ref}"]
    for ln in d.lines:
        out.append(f"{ln.index}. {print_formula(ln.formula)} ; {format_justification(ln.just)}")
    return "\n".join(out) + "\n"


def _parse_just(text: str, lineno: int, source: str | None) -> Justification:
    parts = text.split()
    if not parts:
        raise ProofFormatError("missing justification", lineno, source)
    head, args = parts[0].upper(), parts[1:]

    def ints(xs: list[str]) -> list[int]:
        try:
            return [int(x) for x in xs]
        except ValueError:
            raise ProofFormatError(f"expected line numbers in {text!r}", lineno, source) from None

    def agent_list(s: str) -> tuple[int, ...]:
        return tuple(ints(s.split(",")))

    try:
        if head == "TAUT" and not args:
            return Axiom(AxiomName.Taut)
        if head == "AX" and len(args) == 1:
            return Axiom(AxiomName.parse(args[0]))
        if head == "MP" and len(args) == 2:
            a, b = ints(args)
            return MP(a, b)
        if head == "NECX" and len(args) == 1:
            return NecNext(ints(args)[0])
        if head == "NECG" and len(args) == 1:
            return NecBox(ints(args)[0])
        if head == "CS" and len(args) == 2:
            return AxNec(args[0], ints(args[1:])[0])
        if head in ("CSSTAR", "ICN") and len(args) == 3:
            n = ints(args[:1])[0]
            cls = AxNecStar if head == "CSSTAR" else IterConstNec
            return cls(n, args[1], agent_list(args[2]))
    except ValueError as exc:
        raise ProofFormatError(str(exc), lineno, source) from None
    raise ProofFormatError(f"bad justification {text!r}", lineno, source)


def read_proof(text: str, source: str | None = None) -> Derivation:
    """Parse the line-oriented proof format (see ``write_proof``)."""
    variant = Variant.LPLTL
    agents = 2
    cs_ref = "schematic"
    raw: list[tuple[int, int, str, str]] = []
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        head, sep, rest = line.partition(":")
        key = head.strip().lower()
        if sep and key in ("variant", "agents", "cs"):
            try:
                if key == "variant":
                    variant = Variant.parse(rest)
                elif key == "agents":
                    agents = int(rest)
                else:
                    cs_ref = rest.strip()
            except ValueError as exc:
                raise ProofFormatError(str(exc), lineno, source) from None
            continue
        num, dot, body = line.partition(".")
        if not dot or not num.strip().isdigit():
            raise ProofFormatError("expected 'N. <formula> ; <justification>'", lineno, source)
        formula_text, semi, just_text = body.rpartition(";")
        if not semi:
            raise ProofFormatError("missing ';' before justification", lineno, source)
        raw.append((lineno, int(num), formula_text, just_text))
    lines = []
    for lineno, index, formula_text, just_text in raw:
        try:
            f = parse_formula(formula_text, agents, None, experimental=True)
        except LogicError as exc:
            raise ProofFormatError(str(exc), lineno, source) from None
        lines.append(Line(index, f, _parse_just(just_text, lineno, source)))
    return Derivation(lines, variant, agents, cs_ref)


def read_cs(text: str, source: str | None = None, agents: int | None = None) -> FiniteCS:
    """CS file lines: ``<constant> <agent> : <formula>``."""
    entries = set()
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        head, sep, body = line.partition(":")
        parts = head.split()
        if not sep or len(parts) != 2 or not parts[0].startswith("c") or not parts[1].isdigit():
            raise ProofFormatError("expected '<constant> <agent> : <formula>'", lineno, source)
        try:
            f = parse_formula(body, agents, None, experimental=True)
        except LogicError as exc:
            raise ProofFormatError(str(exc), lineno, source) from None
        entries.add((parts[0], int(parts[1]), f))
    return FiniteCS(frozenset(entries))


def write_cs(cs: FiniteCS) -> str:
    rows = sorted(cs.entries, key=lambda e: (e[0], e[1], print_formula(e[2])))
    return "".join(f"{c} {i} : {print_formula(f)}\n" for c, i, f in rows)


def load_cs(
    ref: str,
    variant: Variant,
    base: Path | None = None,
    experimental: bool = False,
    agents: int | None = None,
) -> ConstantSpec:
    """Resolve a ``cs:`` reference: the keyword ``schematic`` or a file path."""
    if ref.strip().lower() == "schematic":
        return SchematicCS(variant, experimental)
    path = Path(ref)
    if base is not None and not path.is_absolute():
        path = base / path
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ProofFormatError(f"cannot read CS file {path}: {exc.strerror}") from None
    cs = read_cs(text, str(path), agents)
    bad = cs.invalid_entries(variant, experimental)
    if bad:
        c, i, f = bad[0]
        raise ProofFormatError(f"CS entry [{c}]_{i} {print_formula(f)} is not an axiom of {variant.value}", source=str(path))
    return cs


__all__ = [
    "AxiomName",
    "Axiom",
    "AxNec",
    "AxNecStar",
    "CheckReport",
    "ConstantSpec",
    "Derivation",
    "DerivationBuilder",
    "FiniteCS",
    "IterConstNec",
    "Line",
    "LineVerdict",
    "MP",
    "NecBox",
    "NecNext",
    "NotAxAppropriate",
    "ProofFormatError",
    "SchematicCS",
    "TautologyTooLarge",
    "check_derivation",
    "cs_lookup",
    "cs_restrict",
    "enabled_axioms",
    "is_axiom",
    "is_schema_instance",
    "is_tautology",
    "iter_const_chain",
    "load_cs",
    "match_axiom",
    "peel_chain",
    "read_cs",
    "read_proof",
    "schematic_name",
    "star_chain",
    "truth_table",
    "write_cs",
    "write_proof",
]
