"""Satisfiability by atom construction and lasso search.

Atoms are truth assignments to the subformulas of the input that respect a
set of local consistency conditions.  Atoms are linked by a next-step
relation, atoms without successors are pruned, and an ultimately periodic
path that fulfils all its until-obligations is searched for.  The atoms on
the chosen paths become the states of a finite interpreted system, which is
then model-checked with the ordinary evaluator before SAT is reported.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

import networkx as nx

from .proof import ConstantSpec, SchematicCS, is_schema_instance
from .semantics import (
    EvidenceOracle,
    Frame,
    InterpretedSystem,
    LassoRun,
    validate_system,
)
from .syntax import (
    Bottom,
    Formula,
    Implies,
    Just,
    LogicError,
    Next,
    Prop,
    Until,
    Variant,
    VariantError,
    agents_of,
    check_operators,
    formula_size,
    subformulas,
)

CLOSURE_CAP = 24
LASSO_CAP = 64


class ClosureTooLarge(LogicError):
    pass


class InvalidExtraction(LogicError):
    pass


class VerificationMismatch(LogicError):
    pass


@dataclass(frozen=True)
class Atom:
    id: int
    bits: int

    def has(self, k: int) -> bool:
        return bool(self.bits >> k & 1)


@dataclass
class AtomSpace:
    """The closure of the input together with its consistent atoms."""

    chi: Formula
    sub: tuple[Formula, ...]
    index: dict[Formula, int]
    atoms: list[Atom]
    variant: Variant
    agents: int

    def members(self, atom: Atom) -> list[Formula]:
        return [f for k, f in enumerate(self.sub) if atom.has(k)]

    def holds(self, atom: Atom, f: Formula) -> bool:
        return atom.has(self.index[f])


@dataclass
class AtomGraph:
    space: AtomSpace
    succ: dict[int, list[int]]
    retained: frozenset[int]
    pruned: int

    @property
    def atoms(self) -> list[Atom]:
        return self.space.atoms

    def atom(self, k: int) -> Atom:
        return self.space.atoms[k]


@dataclass
class Certificate:
    status: str
    system: InterpretedSystem | None = None
    run: int = 0
    position: int = 0
    lassos: list[tuple[list[int], list[int]]] = field(default_factory=list)
    stats: dict[str, int] = field(default_factory=dict)

    @property
    def sat(self) -> bool:
        return self.status == "SAT"


# ---------------------------------------------------------------------------
# Atoms


def _local_oracle(space_cs: ConstantSpec, variant: Variant, agents: int, justs: list[Just]) -> EvidenceOracle:
    seed: dict = {}
    for j in justs:
        seed.setdefault((j.agent, "w", j.term), set()).add(j.body)
    frame = Frame(("w",), {i: frozenset({("w", "w")}) for i in range(1, agents + 1)})
    return EvidenceOracle(frame, {k: frozenset(v) for k, v in seed.items()}, space_cs, variant, agents)


def build_atoms(
    chi: Formula,
    cs: ConstantSpec | None = None,
    variant: Variant = Variant.LPLTL,
    agents: int | None = None,
    cap: int = CLOSURE_CAP,
) -> AtomSpace:
    """Enumerate the locally consistent assignments to the subformulas of ``chi``."""
    if variant is Variant.LPLTL_G:
        raise VariantError("satisfiability is not available for LPLTL^G")
    check_operators(chi, variant)
    cs = SchematicCS(variant) if cs is None else cs
    agents = max([agents or 1, *agents_of(chi)])
    sub = tuple(sorted(subformulas(chi), key=formula_size))
    if len(sub) > cap:
        raise ClosureTooLarge(f"closure has {len(sub)} formulas, cap is {cap}")
    index = {f: k for k, f in enumerate(sub)}
    forced = [is_schema_instance(f, variant) for f in sub]
    justs = [k for k, f in enumerate(sub) if isinstance(f, Just)]

    def options(k: int, bits: int) -> tuple[bool, ...]:
        f = sub[k]

        def val(g: Formula) -> bool:
            return bool(bits >> index[g] & 1)

        if isinstance(f, Bottom):
            opts: tuple[bool, ...] = (False,)
        elif isinstance(f, Implies):
            opts = ((not val(f.left)) or val(f.right),)
        elif isinstance(f, Until):
            if val(f.right):
                opts = (True,)
            elif not val(f.left):
                opts = (False,)
            else:
                opts = (False, True)
        elif isinstance(f, Just):
            opts = (False, True) if val(f.body) else (False,)
        else:
            opts = (False, True)
        if forced[k]:
            opts = tuple(o for o in opts if o)
        return opts

    def evidence_consistent(bits: int) -> bool:
        true_j = [sub[k] for k in justs if bits >> k & 1]
        orc = _local_oracle(cs, variant, agents, true_j)
        for k in justs:
            if not bits >> k & 1:
                j = sub[k]
                if orc.member(j.agent, "w", j.term, j.body):
                    return False
        return True

    found: list[int] = []

    def walk(k: int, bits: int) -> None:
        if k == len(sub):
            if not justs or evidence_consistent(bits):
                found.append(bits)
            return
        for o in options(k, bits):
            walk(k + 1, bits | (1 << k) if o else bits)

    walk(0, 0)
    found.sort()
    atoms = [Atom(n, b) for n, b in enumerate(found)]
    return AtomSpace(chi, sub, index, atoms, variant, agents)


# ---------------------------------------------------------------------------
# Next-step relation


def _step_constraint(space: AtomSpace, atom: Atom) -> tuple[int, int]:
    """(care mask, required bits) that every successor must match."""
    care = want = 0
    for k, f in enumerate(space.sub):
        if isinstance(f, Next):
            a = space.index[f.arg]
            care |= 1 << a
            if atom.has(k):
                want |= 1 << a
        elif isinstance(f, Until):
            here = atom.has(k)
            if here and not space.holds(atom, f.right):
                care |= 1 << k
                want |= 1 << k
            elif not here and space.holds(atom, f.left):
                care |= 1 << k
    return care, want


def build_next(space: AtomSpace) -> AtomGraph:
    """Successor lists, then iterated removal of atoms with no successor."""
    cons = [_step_constraint(space, a) for a in space.atoms]
    groups: dict[int, dict[int, list[int]]] = {}
    for care in {c for c, _ in cons}:
        g: dict[int, list[int]] = {}
        for a in space.atoms:
            g.setdefault(a.bits & care, []).append(a.id)
        groups[care] = g
    succ = {a.id: list(groups[cons[a.id][0]].get(cons[a.id][1], ())) for a in space.atoms}
    alive = set(succ)
    changed = True
    while changed:
        changed = False
        for k in sorted(alive):
            if not any(s in alive for s in succ[k]):
                alive.discard(k)
                changed = True
    succ = {k: [s for s in succ[k] if s in alive] for k in sorted(alive)}
    return AtomGraph(space, succ, frozenset(alive), len(space.atoms) - len(alive))


# ---------------------------------------------------------------------------
# Lassos


def _untils(space: AtomSpace) -> list[int]:
    return [k for k, f in enumerate(space.sub) if isinstance(f, Until)]


def self_fulfilling_components(graph: AtomGraph) -> list[list[int]]:
    """Non-trivial SCCs in which every until-formula that occurs is fulfilled."""
    g = nx.DiGraph()
    g.add_nodes_from(graph.retained)
    g.add_edges_from((a, b) for a, bs in graph.succ.items() for b in bs)
    space = graph.space
    untils = _untils(space)
    out = []
    for comp in nx.strongly_connected_components(g):
        comp = sorted(comp)
        if len(comp) == 1 and comp[0] not in graph.succ[comp[0]]:
            continue
        ok = True
        for k in untils:
            f = space.sub[k]
            if any(graph.atom(a).has(k) for a in comp) and not any(
                space.holds(graph.atom(a), f.right) for a in comp
            ):
                ok = False
                break
        if ok:
            out.append(comp)
    out.sort()
    return out


def _bfs_path(graph: AtomGraph, start: int, goal: set[int], within: set[int] | None = None) -> list[int] | None:
    """Shortest path from ``start`` to a node of ``goal`` (inclusive both ends)."""
    prev: dict[int, int | None] = {start: None}
    queue = deque([start])
    while queue:
        a = queue.popleft()
        if a in goal:
            path = []
            node: int | None = a
            while node is not None:
                path.append(node)
                node = prev[node]
            return path[::-1]
        for b in graph.succ[a]:
            if b not in prev and (within is None or b in within):
                prev[b] = a
                queue.append(b)
    return None


def _loop_through(graph: AtomGraph, entry: int, comp: set[int]) -> list[int]:
    """A cycle from ``entry`` back to itself visiting a fulfilling atom for every until."""
    space = graph.space
    targets = []
    for k in _untils(space):
        f = space.sub[k]
        if any(graph.atom(a).has(k) for a in comp):
            targets.append(min(a for a in comp if space.holds(graph.atom(a), f.right)))
    loop = [entry]
    here = entry
    for t in sorted(set(targets)):
        if t in loop:
            continue
        path = _bfs_path(graph, here, {t}, comp)
        loop.extend(path[1:])
        here = t
    # close the cycle; a one-step path back to entry may be a self-loop
    back = _bfs_path_nonempty(graph, here, entry, comp)
    loop.extend(back[1:-1])
    return loop


def _bfs_path_nonempty(graph: AtomGraph, src: int, dst: int, comp: set[int]) -> list[int]:
    """Path with at least one edge from ``src`` to ``dst`` inside ``comp``."""
    best = None
    for b in graph.succ[src]:
        if b not in comp:
            continue
        if b == dst:
            return [src, dst]
        p = _bfs_path(graph, b, {dst}, comp)
        if p is not None and (best is None or len(p) + 1 < len(best)):
            best = [src, *p]
    if best is None:
        raise InvalidExtraction("component is not strongly connected")
    return best


def find_acceptable_lasso(
    graph: AtomGraph, start: int, components: list[list[int]] | None = None
) -> tuple[list[int], list[int]] | None:
    lassos = acceptable_lassos(graph, start, 1, components)
    return lassos[0] if lassos else None


def acceptable_lassos(
    graph: AtomGraph, start: int, cap: int = LASSO_CAP, components: list[list[int]] | None = None
) -> list[tuple[list[int], list[int]]]:
    """One lasso from ``start`` per reachable self-fulfilling component, nearest first."""
    if start not in graph.retained:
        return []
    comps = self_fulfilling_components(graph) if components is None else components
    found = []
    for comp in comps:
        path = _bfs_path(graph, start, set(comp))
        if path is not None:
            found.append((len(path), comp[0], path, comp))
    found.sort(key=lambda x: (x[0], x[1]))
    out = []
    for _, _, path, comp in found[:cap]:
        entry = path[-1]
        out.append((path[:-1], _loop_through(graph, entry, set(comp))))
    return out


# ---------------------------------------------------------------------------
# Model extraction


def state_name(atom_id: int) -> str:
    return f"a{atom_id}"


def extract_model(
    graph: AtomGraph,
    lassos: list[tuple[list[int], list[int]]],
    cs: ConstantSpec,
    variant: Variant,
) -> InterpretedSystem:
    if not lassos:
        raise InvalidExtraction("no lassos to extract from")
    space = graph.space
    used = sorted({a for pre, loop in lassos for a in (*pre, *loop)})
    justs = [k for k, f in enumerate(space.sub) if isinstance(f, Just)]
    carried: dict[tuple[int, int], list[int]] = {}
    for a in used:
        for i in range(1, space.agents + 1):
            carried[(a, i)] = [k for k in justs if space.sub[k].agent == i and graph.atom(a).has(k)]
    rels: dict[int, frozenset[tuple[str, str]]] = {}
    for i in range(1, space.agents + 1):
        pairs = set()
        for a in used:
            need = 0
            for k in carried[(a, i)]:
                need |= 1 << k | 1 << space.index[space.sub[k].body]
            for b in used:
                if graph.atom(b).bits & need == need:
                    pairs.add((state_name(a), state_name(b)))
        rels[i] = frozenset(pairs)
    seed: dict = {}
    valuation = {}
    for a in used:
        atom = graph.atom(a)
        valuation[state_name(a)] = frozenset(f.name for f in space.members(atom) if isinstance(f, Prop))
        for k in justs:
            if atom.has(k):
                j = space.sub[k]
                seed.setdefault((j.agent, state_name(a), j.term), set()).add(j.body)
    sys = InterpretedSystem(
        Frame(tuple(state_name(a) for a in used), rels),
        tuple(LassoRun(tuple(map(state_name, pre)), tuple(map(state_name, loop))) for pre, loop in lassos),
        valuation,
        {k: frozenset(v) for k, v in seed.items()},
        cs,
        variant,
        space.agents,
    )
    report = validate_system(sys)
    if not report.ok:
        raise InvalidExtraction("; ".join(report.violations))
    return sys


# ---------------------------------------------------------------------------
# Decision procedure


def decide(
    chi: Formula,
    cs: ConstantSpec | None = None,
    variant: Variant = Variant.LPLTL,
    agents: int | None = None,
    cap: int = CLOSURE_CAP,
    lasso_cap: int = LASSO_CAP,
    max_mismatches: int = 0,
) -> Certificate:
    """SAT with a verified finite witness, or NOMODEL with search statistics."""
    cs = SchematicCS(variant) if cs is None else cs
    space = build_atoms(chi, cs, variant, agents, cap)
    graph = build_next(space)
    comps = self_fulfilling_components(graph)
    stats = {
        "closure": len(space.sub),
        "atoms": len(space.atoms),
        "pruned": graph.pruned,
        "sccs": len(comps),
        "candidates": 0,
        "mismatches": 0,
    }
    root = space.index[chi]
    for a in sorted(graph.retained):
        if not graph.atom(a).has(root):
            continue
        lassos = acceptable_lassos(graph, a, lasso_cap, comps)
        if not lassos:
            continue
        stats["candidates"] += 1
        sys = extract_model(graph, lassos, cs, variant)
        if sys.truth(0, 0, chi):
            stats["states"] = len(sys.states)
            return Certificate("SAT", sys, 0, 0, lassos, stats)
        stats["mismatches"] += 1
        if stats["mismatches"] > max_mismatches:
            raise VerificationMismatch(
                f"extracted model from atom {a} refutes the formula it was built for"
            )
    return Certificate("NOMODEL", stats=stats)
