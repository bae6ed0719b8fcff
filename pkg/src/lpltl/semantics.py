"""Finite interpreted systems with lasso-shaped runs.

A run is stored as ``prefix`` followed by ``loop`` repeated forever, so every
run has finitely many distinct positions ("canonical positions"
``0 .. len(prefix) + len(loop) - 1``) and truth of any formula is decidable.

Evidence is given by a finite seed per (agent, state, term).  The evidence
function actually used for truth is the least one that contains the seed and
is closed under monotonicity, the constant specification, application, sum,
positive introspection and, for the star variant, the star condition.  It is
never materialised; ``EvidenceOracle`` answers membership queries by structural
recursion on the term.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Mapping

from .proof import (
    ConstantSpec,
    FiniteCS,
    ProofFormatError,
    SchematicCS,
    load_cs,
    peel_chain,
    star_chain,
)
from .syntax import (
    App,
    Bang,
    Bottom,
    Const,
    Formula,
    Implies,
    Just,
    LogicError,
    Next,
    Prop,
    Star,
    Sum,
    Term,
    Until,
    Variant,
    VariantError,
    allowed_term_ops,
    box,
    check_operators,
    parse_formula,
    parse_term,
    print_formula,
    print_term,
    term_depth,
    term_operators,
    unbox,
    undiamond,
    unstar,
)

MAX_TERM_DEPTH = 64


class UnsupportedTerm(VariantError):
    pass


class EvidenceDepthExceeded(LogicError):
    pass


class SystemFormatError(ProofFormatError):
    pass


@dataclass(frozen=True)
class LassoRun:
    prefix: tuple[str, ...]
    loop: tuple[str, ...]

    def __post_init__(self):
        if not self.loop:
            raise ValueError("lasso loop must be non-empty")
        object.__setattr__(self, "prefix", tuple(self.prefix))
        object.__setattr__(self, "loop", tuple(self.loop))

    @property
    def span(self) -> int:
        return len(self.prefix) + len(self.loop)

    def norm(self, n: int) -> int:
        """Map a position to the canonical position with the same future."""
        p = len(self.prefix)
        if n < p:
            return n
        return p + (n - p) % len(self.loop)

    def state(self, n: int) -> str:
        n = self.norm(n)
        p = len(self.prefix)
        return self.prefix[n] if n < p else self.loop[n - p]

    def positions(self) -> range:
        return range(self.span)

    def states(self) -> set[str]:
        return set(self.prefix) | set(self.loop)


@dataclass(frozen=True)
class Frame:
    states: tuple[str, ...]
    relations: Mapping[int, frozenset[tuple[str, str]]]

    def related(self, agent: int, v: str, w: str) -> bool:
        return (v, w) in self.relations.get(agent, ())

    def successors(self, agent: int, v: str) -> list[str]:
        return [w for w in self.states if (v, w) in self.relations.get(agent, ())]

    def predecessors(self, agent: int, w: str) -> list[str]:
        return [v for v in self.states if (v, w) in self.relations.get(agent, ())]


EvidenceBase = Mapping[tuple[int, str, Term], frozenset[Formula]]


class EvidenceOracle:
    """Membership in the least evidence function extending a seed."""

    def __init__(
        self,
        frame: Frame,
        seed: EvidenceBase,
        cs: ConstantSpec,
        variant: Variant,
        agents: int,
        experimental: bool = False,
        max_depth: int = MAX_TERM_DEPTH,
    ):
        self.frame = frame
        self.seed = seed
        self.cs = cs
        self.variant = variant
        self.agents = agents
        self.experimental = experimental
        self.max_depth = max_depth
        self._allowed = allowed_term_ops(variant, experimental)
        self._preds = {
            (i, w): frame.predecessors(i, w) for i in range(1, agents + 1) for w in frame.states
        }
        self._seeds_at: dict[tuple[int, str, Term], frozenset[Formula]] = {}
        self._member: dict[tuple[int, str, Term, Formula], bool] = {}
        self._sets: dict[tuple[int, str, Term], frozenset[Formula]] = {}

    def _check_term(self, t: Term) -> None:
        bad = term_operators(t) - self._allowed
        if bad:
            raise UnsupportedTerm(f"term {print_term(t)} not available in {self.variant.value}")
        if term_depth(t) > self.max_depth:
            raise EvidenceDepthExceeded(f"term depth {term_depth(t)} exceeds {self.max_depth}")

    def seeds_at(self, i: int, w: str, t: Term) -> frozenset[Formula]:
        """Seed formulas for ``t`` pulled along R_i into ``w`` (monotonicity)."""
        key = (i, w, t)
        got = self._seeds_at.get(key)
        if got is None:
            acc: set[Formula] = set()
            for v in self._preds.get((i, w), ()):
                acc |= self.seed.get((i, v, t), frozenset())
            got = frozenset(acc)
            self._seeds_at[key] = got
        return got

    def member(self, i: int, w: str, t: Term, f: Formula) -> bool:
        key = (i, w, t, f)
        got = self._member.get(key)
        if got is None:
            self._check_term(t)
            got = self._member_uncached(i, w, t, f)
            self._member[key] = got
        return got

    def _member_uncached(self, i: int, w: str, t: Term, f: Formula) -> bool:
        if f in self.seeds_at(i, w, t):
            return True
        if isinstance(t, Const):
            return self.cs.contains(t.name, i, f)
        if isinstance(t, Sum):
            return self.member(i, w, t.left, f) or self.member(i, w, t.right, f)
        if isinstance(t, Bang):
            return (
                isinstance(f, Just)
                and f.term == t.arg
                and f.agent == i
                and self.member(i, w, t.arg, f.body)
            )
        if isinstance(t, App):
            for g in self.evidence(i, w, t.left):
                if isinstance(g, Implies) and g.right == f and self.member(i, w, t.right, g.left):
                    return True
            # the left side may be a schematic constant whose instance is not enumerable
            for g in self.evidence(i, w, t.right):
                if self.member(i, w, t.left, Implies(g, f)):
                    return True
            return False
        if isinstance(t, Star) and self.variant is Variant.LPLTL_STAR:
            return self._star_member(t, f)
        return False

    def _star_member(self, t: Term, f: Formula) -> bool:
        base, n = unstar(t)
        if not isinstance(base, Const):
            return False
        inner = unbox(f)
        if inner is None:
            return False
        peeled = peel_chain(inner, boxed=True)
        if peeled is None:
            return False
        c, agents, body = peeled
        if c != base.name or len(agents) != n:
            return False
        if any(not 1 <= j <= self.agents for j in agents):
            return False
        return self.cs.contains(c, agents[0], body)

    def evidence(self, i: int, w: str, t: Term) -> frozenset[Formula]:
        """The enumerable part of E_i(w, t).

        Exact for finite constant specifications; with a schematic one it
        contains the instances whose constant names have been generated in
        this process.
        """
        key = (i, w, t)
        got = self._sets.get(key)
        if got is not None:
            return got
        self._check_term(t)
        acc: set[Formula] = set(self.seeds_at(i, w, t))
        if isinstance(t, Const):
            acc.update(self.cs.formulas_for(t.name, i))
        elif isinstance(t, Sum):
            acc |= self.evidence(i, w, t.left)
            acc |= self.evidence(i, w, t.right)
        elif isinstance(t, Bang):
            acc.update(Just(t.arg, i, g) for g in self.evidence(i, w, t.arg))
        elif isinstance(t, App):
            for g in self.evidence(i, w, t.left):
                if isinstance(g, Implies) and self.member(i, w, t.right, g.left):
                    acc.add(g.right)
        elif isinstance(t, Star) and self.variant is Variant.LPLTL_STAR:
            base, n = unstar(t)
            if isinstance(base, Const):
                for i0 in range(1, self.agents + 1):
                    for body in self.cs.formulas_for(base.name, i0):
                        for rest in itertools.product(range(1, self.agents + 1), repeat=n - 1):
                            acc.add(box(star_chain(base.name, (i0, *rest), body)))
        got = frozenset(acc)
        self._sets[key] = got
        return got


@dataclass
class InterpretedSystem:
    frame: Frame
    runs: tuple[LassoRun, ...]
    valuation: Mapping[str, frozenset[str]]
    seed: EvidenceBase = field(default_factory=dict)
    cs: ConstantSpec = field(default_factory=SchematicCS)
    variant: Variant = Variant.LPLTL
    agents: int = 2
    experimental: bool = False

    def __post_init__(self):
        self.runs = tuple(self.runs)
        self._oracle: EvidenceOracle | None = None
        self._truth: dict[tuple[int, int, Formula], bool] = {}

    @property
    def states(self) -> tuple[str, ...]:
        return self.frame.states

    @property
    def oracle(self) -> EvidenceOracle:
        if self._oracle is None:
            self._oracle = EvidenceOracle(
                self.frame, self.seed, self.cs, self.variant, self.agents, self.experimental
            )
        return self._oracle

    def with_variant(self, variant: Variant) -> "InterpretedSystem":
        return InterpretedSystem(
            self.frame, self.runs, self.valuation, self.seed, self.cs, variant, self.agents, self.experimental
        )

    def ev_member(self, i: int, w: str, t: Term, f: Formula) -> bool:
        return self.oracle.member(i, w, t, f)

    def truth(self, run: int, n: int, f: Formula) -> bool:
        n = self.runs[run].norm(n)
        key = (run, n, f)
        got = self._truth.get(key)
        if got is None:
            got = self._truth_uncached(run, n, f)
            self._truth[key] = got
        return got

    def _truth_uncached(self, run: int, n: int, f: Formula) -> bool:
        r = self.runs[run]
        if isinstance(f, Prop):
            return f.name in self.valuation.get(r.state(n), ())
        if isinstance(f, Bottom):
            return False
        if isinstance(f, Implies):
            return not self.truth(run, n, f.left) or self.truth(run, n, f.right)
        if isinstance(f, Next):
            return self.truth(run, n + 1, f.arg)
        if isinstance(f, Until):
            pos = n
            # after span steps every reachable position has been visited
            for _ in range(r.span + 1):
                if self.truth(run, pos, f.right):
                    return True
                if not self.truth(run, pos, f.left):
                    return False
                pos = r.norm(pos + 1)
            return False
        if isinstance(f, Just):
            here = r.state(n)
            if not self.ev_member(f.agent, here, f.term, f.body):
                return False
            for k, other in enumerate(self.runs):
                for m in other.positions():
                    if self.frame.related(f.agent, here, other.state(m)) and not self.truth(k, m, f.body):
                        return False
            return True
        raise TypeError(f"not a formula: {f!r}")


def eval_formula(sys: InterpretedSystem, run: int, n: int, f: Formula) -> bool:
    return sys.truth(run, n, f)


def holds_everywhere(sys: InterpretedSystem, f: Formula) -> bool:
    return all(sys.truth(k, n, f) for k, r in enumerate(sys.runs) for n in r.positions())


def brute_eval(sys: InterpretedSystem, run: int, n: int, f: Formula, horizon: int | None = None) -> bool:
    """Reference evaluator that unrolls each run to an explicit trace.

    ``horizon`` must be at least twice the span of every run.  Temporal
    operators scan the unrolled trace; positions past the end are folded
    back by whole loop lengths.  Meant as a differential oracle for tests.
    """
    need = 2 * max(r.span for r in sys.runs)
    horizon = need if horizon is None else horizon
    if horizon < need:
        raise ValueError(f"horizon {horizon} below the required {need}")
    traces = [[r.state(k) for k in range(horizon)] for r in sys.runs]
    memo: dict[tuple[int, int, Formula], bool] = {}

    def fold(k: int, r: int) -> int:
        step = len(sys.runs[r].loop)
        while k >= horizon:
            k -= step
        return k

    def ev(g: Formula, r: int, k: int) -> bool:
        k = fold(k, r)
        key = (r, k, g)
        if key in memo:
            return memo[key]
        trace = traces[r]
        inner = unbox(g)
        if inner is not None:
            res = all(ev(inner, r, j) for j in range(k, k + horizon))
        elif undiamond(g) is not None:
            res = any(ev(undiamond(g), r, j) for j in range(k, k + horizon))
        elif isinstance(g, Prop):
            res = g.name in sys.valuation.get(trace[k], ())
        elif isinstance(g, Bottom):
            res = False
        elif isinstance(g, Implies):
            res = (not ev(g.left, r, k)) or ev(g.right, r, k)
        elif isinstance(g, Next):
            res = ev(g.arg, r, k + 1)
        elif isinstance(g, Until):
            res = False
            for j in range(k, k + horizon):
                if ev(g.right, r, j):
                    res = True
                    break
                if not ev(g.left, r, j):
                    break
        elif isinstance(g, Just):
            res = sys.ev_member(g.agent, trace[k], g.term, g.body) and all(
                ev(g.body, r2, j)
                for r2 in range(len(sys.runs))
                for j in range(horizon)
                if sys.frame.related(g.agent, trace[k], traces[r2][j])
            )
        else:
            raise TypeError(g)
        memo[key] = res
        return res

    return ev(f, run, n)


# ---------------------------------------------------------------------------
# Validation


@dataclass
class ValidationReport:
    violations: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations


def validate_system(sys: InterpretedSystem) -> ValidationReport:
    rep = ValidationReport()
    bad = rep.violations
    states = sys.frame.states
    state_set = set(states)
    if not states:
        bad.append("frame has no states")
    if len(state_set) != len(states):
        bad.append("duplicate state names")
    if sys.agents < 1:
        bad.append("agents must be at least 1")
    for i, rel in sorted(sys.frame.relations.items()):
        if not 1 <= i <= sys.agents:
            bad.append(f"relation for agent {i} outside 1..{sys.agents}")
        for v, w in sorted(rel):
            if v not in state_set or w not in state_set:
                bad.append(f"R_{i} pair ({v},{w}) mentions an unknown state")
    for i in range(1, sys.agents + 1):
        rel = sys.frame.relations.get(i, frozenset())
        for s in states:
            if (s, s) not in rel:
                bad.append(f"R_{i} not reflexive: missing ({s},{s})")
        succ: dict[str, set[str]] = {}
        for v, w in rel:
            succ.setdefault(v, set()).add(w)
        for u, vs in sorted(succ.items()):
            for v in sorted(vs):
                for w in sorted(succ.get(v, ())):
                    if w not in succ[u]:
                        bad.append(f"R_{i} not transitive: ({u},{v}) and ({v},{w}) but not ({u},{w})")
    if not sys.runs:
        bad.append("system has no runs")
    for k, r in enumerate(sys.runs):
        missing = sorted(r.states() - state_set)
        if missing:
            bad.append(f"run {k} visits unknown states {missing}")
    for s in sorted(set(sys.valuation) - state_set):
        bad.append(f"valuation for unknown state {s}")
    allowed = allowed_term_ops(sys.variant, sys.experimental)
    for (i, w, t), fs in sorted(sys.seed.items(), key=lambda kv: (kv[0][0], kv[0][1], print_term(kv[0][2]))):
        if not 1 <= i <= sys.agents:
            bad.append(f"evidence for agent {i} outside 1..{sys.agents}")
        if w not in state_set:
            bad.append(f"evidence at unknown state {w}")
        if term_operators(t) - allowed:
            bad.append(f"evidence term {print_term(t)} not available in {sys.variant.value}")
        for f in fs:
            try:
                check_operators(f, sys.variant, sys.experimental)
            except VariantError as exc:
                bad.append(f"evidence formula {print_formula(f)}: {exc}")
    if isinstance(sys.cs, FiniteCS):
        for c, i, f in sys.cs.invalid_entries(sys.variant, sys.experimental):
            bad.append(f"CS entry [{c}]_{i} {print_formula(f)} is not an axiom of {sys.variant.value}")
    if bad:
        return rep
    _spot_check_closure(sys, bad)
    return rep


def _spot_check_closure(sys: InterpretedSystem, bad: list[str]) -> None:
    """Re-derive closure facts one step away from the seed and the CS."""
    orc = sys.oracle
    frame = sys.frame
    for (i, v, t), fs in sys.seed.items():
        for f in fs:
            for w in frame.successors(i, v):
                if not orc.member(i, w, t, f):
                    bad.append(f"monotonicity: {print_formula(f)} in E_{i}({v},{print_term(t)}) but not at {w}")
            if not orc.member(i, v, Bang(t), Just(t, i, f)):
                bad.append(f"positive introspection fails for {print_term(t)} at {v}")
            if not orc.member(i, v, Sum(t, t), f):
                bad.append(f"sum fails for {print_term(t)} at {v}")
            if isinstance(f, Implies):
                for (j, u, s), gs in sys.seed.items():
                    if j == i and u == v and f.left in gs and not orc.member(i, v, App(t, s), f.right):
                        bad.append(f"application fails for {print_term(t)}, {print_term(s)} at {v}")
    if isinstance(sys.cs, FiniteCS):
        for c, i, f in sys.cs.entries:
            if not 1 <= i <= sys.agents:
                continue
            for w in frame.states:
                if not orc.member(i, w, Const(c), f):
                    bad.append(f"constant specification: {print_formula(f)} not in E_{i}({w},{c})")


# ---------------------------------------------------------------------------
# System files

_PAIR = re.compile(r"\(\s*([^,()\s]+)\s*,\s*([^,()\s]+)\s*\)")


def _names(text: str) -> tuple[str, ...]:
    """Split a name list separated by whitespace and/or commas."""
    return tuple(text.replace(",", " ").split())


def read_system(text: str, source: str | None = None, base: Path | None = None) -> InterpretedSystem:
    agents = 2
    variant = Variant.LPLTL
    cs_ref = "schematic"
    experimental = False
    states: list[str] = []
    rels: dict[int, set[tuple[str, str]]] = {}
    val: dict[str, frozenset[str]] = {}
    raw_evid: list[tuple[int, int, str, str, str]] = []
    runs: list[LassoRun] = []

    def err(msg: str, lineno: int) -> SystemFormatError:
        return SystemFormatError(msg, lineno, source)

    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        key = line.split(None, 1)[0].rstrip(":").lower()
        if key in ("agents", "variant", "states", "cs", "run", "experimental"):
            _, sep, rest = line.partition(":")
            if not sep:
                raise err(f"expected '{key}: ...'", lineno)
            rest = rest.strip()
            try:
                if key == "agents":
                    agents = int(rest)
                elif key == "variant":
                    variant = Variant.parse(rest)
                elif key == "experimental":
                    experimental = rest.lower() in ("1", "yes", "true", "on")
                elif key == "states":
                    states.extend(_names(rest))
                elif key == "cs":
                    cs_ref = rest
                else:
                    pre, semi, loop = rest.partition(";")
                    if not semi:
                        pre, loop = "", pre
                    runs.append(LassoRun(_names(pre), _names(loop)))
            except ValueError as exc:
                raise err(str(exc), lineno) from None
        elif key == "rel":
            head, sep, rest = line.partition(":")
            parts = head.split()
            if not sep or len(parts) != 2 or not parts[1].isdigit():
                raise err("expected 'rel <agent>: (a,b) ...'", lineno)
            pairs = _PAIR.findall(rest)
            if _PAIR.sub("", rest).strip():
                raise err("malformed pair list", lineno)
            rels.setdefault(int(parts[1]), set()).update(pairs)
        elif key == "val":
            head, sep, rest = line.partition(":")
            parts = head.split()
            if not sep or len(parts) != 2:
                raise err("expected 'val <state>: P Q ...'", lineno)
            val[parts[1]] = frozenset(val.get(parts[1], frozenset()) | set(_names(rest)))
        elif key == "evid":
            head, sep, rest = line.partition(":")
            parts = head.split(None, 3)
            if not sep or len(parts) != 4 or not parts[1].isdigit():
                raise err("expected 'evid <agent> <state> <term> : <formula>'", lineno)
            raw_evid.append((lineno, int(parts[1]), parts[2], parts[3], rest))
        else:
            raise err(f"unknown directive {key!r}", lineno)

    seed: dict[tuple[int, str, Term], set[Formula]] = {}
    for lineno, i, w, term_text, formula_text in raw_evid:
        try:
            t = parse_term(term_text, variant, experimental)
            f = parse_formula(formula_text, agents, variant, experimental)
        except LogicError as exc:
            raise err(str(exc), lineno) from None
        seed.setdefault((i, w, t), set()).add(f)
    for i in range(1, agents + 1):
        if i not in rels:
            rels[i] = {(s, s) for s in states}
    try:
        cs = load_cs(cs_ref, variant, base, experimental, agents)
    except ProofFormatError as exc:
        raise SystemFormatError(str(exc), None, source) from None
    return InterpretedSystem(
        Frame(tuple(states), {i: frozenset(r) for i, r in rels.items()}),
        tuple(runs),
        val,
        {k: frozenset(v) for k, v in seed.items()},
        cs,
        variant,
        agents,
        experimental,
    )


def load_system(path: str | Path) -> InterpretedSystem:
    path = Path(path)
    return read_system(path.read_text(encoding="utf-8"), str(path), path.parent)


def write_system(sys: InterpretedSystem, cs_ref: str | None = None) -> str:
    if cs_ref is None:
        cs_ref = "schematic" if isinstance(sys.cs, SchematicCS) else "inline"
    out = [f"agents: {sys.agents}", f"variant: {sys.variant.value}"]
    if sys.experimental:
        out.append("experimental: yes")
    out.append(f"cs: {cs_ref}")
    out.append("states: " + " ".join(sys.frame.states))
    for i in sorted(sys.frame.relations):
        pairs = sorted(sys.frame.relations[i], key=lambda p: (sys.frame.states.index(p[0]), sys.frame.states.index(p[1])))
        out.append(f"rel {i}: " + " ".join(f"({a},{b})" for a, b in pairs))
    for s in sys.frame.states:
        props = sorted(sys.valuation.get(s, ()))
        if props:
            out.append(f"val {s}: " + " ".join(props))
    rows = []
    for (i, w, t), fs in sys.seed.items():
        for f in fs:
            rows.append((i, sys.frame.states.index(w), print_term(t), print_formula(f), w))
    for i, _, t, f, w in sorted(rows):
        out.append(f"evid {i} {w} {t} : {f}")
    for r in sys.runs:
        out.append(f"run: {' '.join(r.prefix)} ; {' '.join(r.loop)}".replace(":  ;", ": ;"))
    return "\n".join(out) + "\n"


def identity_frame(states: Iterable[str], agents: int) -> Frame:
    states = tuple(states)
    return Frame(states, {i: frozenset((s, s) for s in states) for i in range(1, agents + 1)})
