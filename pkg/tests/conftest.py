import random

import pytest
from hypothesis import strategies as st

from lpltl.generate import SystemShape, random_system
from lpltl.syntax import (
    BOT,
    App,
    Bang,
    Const,
    Down,
    Implies,
    Just,
    LArr,
    Next,
    Prop,
    RArr,
    Star,
    Sum,
    Until,
    Up,
    Var,
)

PROPS = ("P", "Q", "R")


def terms(star: bool = False, experimental: bool = False, max_leaves: int = 6):
    leaves = st.one_of(
        st.sampled_from(["c", "c1", "c2"]).map(Const),
        st.sampled_from(["x", "x1", "x2"]).map(Var),
    )
    unary = [Bang]
    if star:
        unary.append(Star)
    if experimental:
        unary += [Down, Up, RArr, LArr]

    def extend(children):
        return st.one_of(
            st.tuples(st.sampled_from(unary), children).map(lambda p: p[0](p[1])),
            st.tuples(children, children).map(lambda p: Sum(*p)),
            st.tuples(children, children).map(lambda p: App(*p)),
        )

    return st.recursive(leaves, extend, max_leaves=max_leaves)


def formulas(agents: int = 2, star: bool = False, experimental: bool = False, max_leaves: int = 12, just: bool = True):
    leaves = st.one_of(st.sampled_from(PROPS).map(Prop), st.just(BOT))
    tm = terms(star, experimental)

    def extend(children):
        options = [
            st.tuples(children, children).map(lambda p: Implies(*p)),
            children.map(Next),
            st.tuples(children, children).map(lambda p: Until(*p)),
        ]
        if just:
            options.append(
                st.tuples(tm, st.integers(1, agents), children).map(lambda p: Just(*p))
            )
        return st.one_of(options)

    return st.recursive(leaves, extend, max_leaves=max_leaves)


@pytest.fixture
def rng():
    return random.Random(20240611)


@pytest.fixture
def small_systems():
    r = random.Random(7)
    return [random_system(r, SystemShape()) for _ in range(25)]
