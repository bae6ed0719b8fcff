"""Seeded random interpreted systems and formulas for property tests and sweeps."""

from __future__ import annotations

import random
from dataclasses import dataclass

from .proof import ConstantSpec, SchematicCS
from .semantics import Frame, InterpretedSystem, LassoRun
from .syntax import (
    BOT,
    App,
    Bang,
    Const,
    Formula,
    Implies,
    Just,
    Next,
    Prop,
    Sum,
    Term,
    Until,
    Variant,
    Var,
    box,
    conj,
    diamond,
    disj,
    neg,
)


@dataclass(frozen=True)
class SystemShape:
    max_states: int = 4
    max_runs: int = 3
    max_agents: int = 2
    max_prefix: int = 2
    max_loop: int = 3
    props: tuple[str, ...] = ("P", "Q")
    seed_entries: int = 3


@dataclass(frozen=True)
class FormulaShape:
    depth: int = 3
    props: tuple[str, ...] = ("P", "Q")
    agents: int = 2
    justifications: bool = True
    terms: tuple[Term, ...] = (
        Var("x"),
        Var("x1"),
        Bang(Var("x")),
        Sum(Var("x"), Var("x1")),
        App(Var("x"), Var("x1")),
    )


def preorder_closure(states: tuple[str, ...], pairs: set[tuple[str, str]]) -> frozenset[tuple[str, str]]:
    """Smallest reflexive and transitive relation containing ``pairs``."""
    rel = set(pairs) | {(s, s) for s in states}
    for k in states:
        for i in states:
            if (i, k) in rel:
                for j in states:
                    if (k, j) in rel:
                        rel.add((i, j))
    return frozenset(rel)


def random_term(rng: random.Random, shape: FormulaShape) -> Term:
    return rng.choice(shape.terms)


def random_formula(rng: random.Random, shape: FormulaShape = FormulaShape(), depth: int | None = None) -> Formula:
    depth = shape.depth if depth is None else depth
    if depth <= 0 or rng.random() < 0.2:
        return BOT if rng.random() < 0.1 else Prop(rng.choice(shape.props))
    kinds = ["imp", "neg", "and", "or", "next", "until", "box", "dia"]
    if shape.justifications:
        kinds += ["just", "just"]
    kind = rng.choice(kinds)
    sub = lambda: random_formula(rng, shape, depth - 1)  # noqa: E731
    if kind == "imp":
        return Implies(sub(), sub())
    if kind == "neg":
        return neg(sub())
    if kind == "and":
        return conj(sub(), sub())
    if kind == "or":
        return disj(sub(), sub())
    if kind == "next":
        return Next(sub())
    if kind == "until":
        return Until(sub(), sub())
    if kind == "box":
        return box(sub())
    if kind == "dia":
        return diamond(sub())
    return Just(random_term(rng, shape), rng.randint(1, shape.agents), sub())


def random_system(
    rng: random.Random,
    shape: SystemShape = SystemShape(),
    variant: Variant = Variant.LPLTL,
    cs: ConstantSpec | None = None,
    formula_shape: FormulaShape | None = None,
) -> InterpretedSystem:
    """A valid system: relations are closed to preorders and runs stay in the frame."""
    n = rng.randint(1, shape.max_states)
    states = tuple(f"s{k}" for k in range(n))
    agents = rng.randint(1, shape.max_agents)
    rels = {}
    for i in range(1, agents + 1):
        pairs = {(rng.choice(states), rng.choice(states)) for _ in range(rng.randint(0, n))}
        rels[i] = preorder_closure(states, pairs)
    runs = []
    for _ in range(rng.randint(1, shape.max_runs)):
        prefix = tuple(rng.choice(states) for _ in range(rng.randint(0, shape.max_prefix)))
        loop = tuple(rng.choice(states) for _ in range(rng.randint(1, shape.max_loop)))
        runs.append(LassoRun(prefix, loop))
    valuation = {s: frozenset(p for p in shape.props if rng.random() < 0.5) for s in states}
    fshape = formula_shape or FormulaShape(depth=2, props=shape.props, agents=agents)
    seed: dict = {}
    for _ in range(rng.randint(0, shape.seed_entries)):
        key = (rng.randint(1, agents), rng.choice(states), random_term(rng, fshape))
        f = random_formula(rng, FormulaShape(2, shape.props, agents, fshape.justifications, fshape.terms))
        seed.setdefault(key, set()).add(f)
    return InterpretedSystem(
        Frame(states, rels),
        tuple(runs),
        valuation,
        {k: frozenset(v) for k, v in seed.items()},
        SchematicCS(variant) if cs is None else cs,
        variant,
        agents,
    )


def constant_pool(names: tuple[str, ...] = ("c", "c1")) -> tuple[Term, ...]:
    return tuple(Const(c) for c in names)
