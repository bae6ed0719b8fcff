"""Terms and formulas of temporal justification logic.

Formulas are kept in core form only (``Prop``, ``Bottom``, ``Implies``,
``Next``, ``Until``, ``Just``); negation, conjunction, the box and diamond
and the rest are expanded by the helper constructors below and by the parser.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass, field
from typing import Iterator


class LogicError(Exception):
    """Base class for all errors raised by this package."""


class ParseError(LogicError):
    def __init__(self, message: str, position: int, expected: tuple[str, ...] = ()):
        self.position = position
        self.expected = expected
        detail = f" (expected one of: {', '.join(expected)})" if expected else ""
        super().__init__(f"{message} at position {position}{detail}")


class AgentOutOfRange(LogicError):
    pass


class VariantError(LogicError):
    pass


class Variant(enum.Enum):
    LPLTL = "LPLTL"
    LPLTL_STAR = "LPLTL*"
    LPLTL_G = "LPLTL^G"

    @classmethod
    def parse(cls, text: str) -> "Variant":
        key = text.strip().lower().replace(" ", "").replace("-", "_")
        aliases = {
            "lpltl": cls.LPLTL,
            "lpltl*": cls.LPLTL_STAR,
            "lpltl_star": cls.LPLTL_STAR,
            "star": cls.LPLTL_STAR,
            "lpltl^g": cls.LPLTL_G,
            "lpltl_g": cls.LPLTL_G,
            "g": cls.LPLTL_G,
        }
        if key not in aliases:
            raise ValueError(f"unknown variant {text!r}")
        return aliases[key]


# ---------------------------------------------------------------------------
# AST


class _Node:
    # Structural hash is cached; trees are immutable and get hashed a lot.
    def __hash__(self) -> int:
        h = self.__dict__.get("_hash")
        if h is None:
            h = hash((type(self).__name__,) + tuple(getattr(self, f) for f in self._fields))
            object.__setattr__(self, "_hash", h)
        return h

    _fields: tuple[str, ...] = ()


class Term(_Node):
    pass


@dataclass(frozen=True, eq=True)
class Const(Term):
    name: str
    _fields = ("name",)
    __hash__ = _Node.__hash__


@dataclass(frozen=True, eq=True)
class Var(Term):
    name: str
    _fields = ("name",)
    __hash__ = _Node.__hash__


@dataclass(frozen=True, eq=True)
class Bang(Term):
    arg: Term
    _fields = ("arg",)
    __hash__ = _Node.__hash__


@dataclass(frozen=True, eq=True)
class Star(Term):
    arg: Term
    _fields = ("arg",)
    __hash__ = _Node.__hash__


@dataclass(frozen=True, eq=True)
class Down(Term):
    arg: Term
    _fields = ("arg",)
    __hash__ = _Node.__hash__


@dataclass(frozen=True, eq=True)
class Up(Term):
    arg: Term
    _fields = ("arg",)
    __hash__ = _Node.__hash__


@dataclass(frozen=True, eq=True)
class RArr(Term):
    arg: Term
    _fields = ("arg",)
    __hash__ = _Node.__hash__


@dataclass(frozen=True, eq=True)
class LArr(Term):
    arg: Term
    _fields = ("arg",)
    __hash__ = _Node.__hash__


@dataclass(frozen=True, eq=True)
class Sum(Term):
    left: Term
    right: Term
    _fields = ("left", "right")
    __hash__ = _Node.__hash__


@dataclass(frozen=True, eq=True)
class App(Term):
    left: Term
    right: Term
    _fields = ("left", "right")
    __hash__ = _Node.__hash__


class Formula(_Node):
    pass


@dataclass(frozen=True, eq=True)
class Prop(Formula):
    name: str
    _fields = ("name",)
    __hash__ = _Node.__hash__


@dataclass(frozen=True, eq=True)
class Bottom(Formula):
    _fields = ()
    __hash__ = _Node.__hash__


@dataclass(frozen=True, eq=True)
class Implies(Formula):
    left: Formula
    right: Formula
    _fields = ("left", "right")
    __hash__ = _Node.__hash__


@dataclass(frozen=True, eq=True)
class Next(Formula):
    arg: Formula
    _fields = ("arg",)
    __hash__ = _Node.__hash__


@dataclass(frozen=True, eq=True)
class Until(Formula):
    left: Formula
    right: Formula
    _fields = ("left", "right")
    __hash__ = _Node.__hash__


@dataclass(frozen=True, eq=True)
class Just(Formula):
    term: Term
    agent: int
    body: Formula
    _fields = ("term", "agent", "body")
    __hash__ = _Node.__hash__


BOT = Bottom()

# unary term operators: class -> (ascii keyword, unicode symbol)
UNARY_TERM_OPS: dict[type, tuple[str, str]] = {
    Bang: ("!", "!"),
    Star: ("*", "⋆"),
    Down: ("dn", "⇓"),
    Up: ("up", "⇑"),
    RArr: ("rr", "⇛"),
    LArr: ("ll", "⇚"),
}


# ---------------------------------------------------------------------------
# Abbreviations


def neg(f: Formula) -> Formula:
    return Implies(f, BOT)


TOP = neg(BOT)


def disj(a: Formula, b: Formula) -> Formula:
    return Implies(neg(a), b)


def conj(a: Formula, b: Formula) -> Formula:
    return neg(disj(neg(a), neg(b)))


def iff(a: Formula, b: Formula) -> Formula:
    return conj(Implies(a, b), Implies(b, a))


def diamond(f: Formula) -> Formula:
    return Until(TOP, f)


def box(f: Formula) -> Formula:
    return neg(diamond(neg(f)))


def star_n(c: Term, n: int) -> Term:
    for _ in range(n):
        c = Star(c)
    return c


# Inverse views used by the axiom matcher and pretty printer.


def unneg(f: Formula) -> Formula | None:
    if isinstance(f, Implies) and f.right == BOT:
        return f.left
    return None


def undisj(f: Formula) -> tuple[Formula, Formula] | None:
    if isinstance(f, Implies):
        a = unneg(f.left)
        if a is not None:
            return a, f.right
    return None


def unconj(f: Formula) -> tuple[Formula, Formula] | None:
    inner = unneg(f)
    if inner is None:
        return None
    parts = undisj(inner)
    if parts is None:
        return None
    a, b = unneg(parts[0]), unneg(parts[1])
    if a is None or b is None:
        return None
    return a, b


def uniff(f: Formula) -> tuple[Formula, Formula] | None:
    parts = unconj(f)
    if parts is None:
        return None
    l, r = parts
    if (
        isinstance(l, Implies)
        and isinstance(r, Implies)
        and l.left == r.right
        and l.right == r.left
    ):
        return l.left, l.right
    return None


def undiamond(f: Formula) -> Formula | None:
    if isinstance(f, Until) and f.left == TOP:
        return f.right
    return None


def unbox(f: Formula) -> Formula | None:
    inner = unneg(f)
    if inner is None:
        return None
    body = undiamond(inner)
    if body is None:
        return None
    return unneg(body)


def unstar(t: Term) -> tuple[Term, int]:
    n = 0
    while isinstance(t, Star):
        t = t.arg
        n += 1
    return t, n


# ---------------------------------------------------------------------------
# Traversal


def iter_terms(f: Formula) -> Iterator[Term]:
    """Yield every justification term occurring in ``f`` (outermost first)."""
    stack = [f]
    while stack:
        g = stack.pop()
        if isinstance(g, Implies) or isinstance(g, Until):
            stack.append(g.right)
            stack.append(g.left)
        elif isinstance(g, Next):
            stack.append(g.arg)
        elif isinstance(g, Just):
            yield g.term
            stack.append(g.body)


def subterms(t: Term) -> Iterator[Term]:
    yield t
    if isinstance(t, (Sum, App)):
        yield from subterms(t.left)
        yield from subterms(t.right)
    elif not isinstance(t, (Const, Var)):
        yield from subterms(t.arg)


def term_operators(t: Term) -> set[type]:
    return {type(s) for s in subterms(t) if type(s) in UNARY_TERM_OPS}


def formula_operators(f: Formula) -> set[type]:
    ops: set[type] = set()
    for t in iter_terms(f):
        ops |= term_operators(t)
    return ops


def agents_of(f: Formula) -> set[int]:
    out: set[int] = set()
    for g in subformulas(f):
        if isinstance(g, Just):
            out.add(g.agent)
    return out


def props_of(f: Formula) -> set[str]:
    return {g.name for g in subformulas(f) if isinstance(g, Prop)}


def term_depth(t: Term) -> int:
    if isinstance(t, (Const, Var)):
        return 0
    if isinstance(t, (Sum, App)):
        return 1 + max(term_depth(t.left), term_depth(t.right))
    return 1 + term_depth(t.arg)


def formula_size(f: Formula) -> int:
    if isinstance(f, (Prop, Bottom)):
        return 1
    if isinstance(f, (Implies, Until)):
        return 1 + formula_size(f.left) + formula_size(f.right)
    if isinstance(f, Next):
        return 1 + formula_size(f.arg)
    return 1 + formula_size(f.body)


def allowed_term_ops(variant: Variant | None, experimental: bool = False) -> set[type]:
    """Unary term operators admitted by ``variant`` (``None`` admits all)."""
    if variant is None:
        return set(UNARY_TERM_OPS)
    ops: set[type] = {Bang}
    if variant in (Variant.LPLTL_STAR, Variant.LPLTL_G):
        ops.add(Star)
    if variant is Variant.LPLTL_G:
        ops.add(Up)
    if experimental:
        ops |= {Down, Up, RArr, LArr}
    return ops


def check_operators(f: Formula, variant: Variant | None, experimental: bool = False) -> None:
    bad = formula_operators(f) - allowed_term_ops(variant, experimental)
    if bad:
        names = sorted(UNARY_TERM_OPS[b][0] for b in bad)
        raise VariantError(f"term operator(s) {names} not available in {variant.value}")


# ---------------------------------------------------------------------------
# Subformulas


def subformulas(chi: Formula) -> tuple[Formula, ...]:
    """The subformula set of ``chi``, in pre-order without duplicates."""
    seen: dict[Formula, None] = {}
    stack = [chi]
    while stack:
        f = stack.pop()
        if f in seen:
            continue
        seen[f] = None
        if isinstance(f, (Implies, Until)):
            stack.append(f.right)
            stack.append(f.left)
        elif isinstance(f, Next):
            stack.append(f.arg)
        elif isinstance(f, Just):
            stack.append(f.body)
    return tuple(seen)


def closure_plus(chi: Formula) -> tuple[Formula, ...]:
    """Subformulas of ``chi`` together with the negation of each of them."""
    sub = subformulas(chi)
    out = dict.fromkeys(sub)
    for f in sub:
        out.setdefault(neg(f))
    return tuple(out)


# ---------------------------------------------------------------------------
# Printing


def print_term(t: Term) -> str:
    if isinstance(t, (Const, Var)):
        return t.name
    if isinstance(t, Sum):
        return f"({print_term(t.left)} + {print_term(t.right)})"
    if isinstance(t, App):
        return f"({print_term(t.left)} . {print_term(t.right)})"
    kw = UNARY_TERM_OPS[type(t)][0]
    sep = "" if kw in ("!", "*") else " "
    return f"{kw}{sep}{print_term(t.arg)}"


def print_formula(f: Formula) -> str:
    """Canonical, fully parenthesised core syntax."""
    if isinstance(f, Prop):
        return f.name
    if isinstance(f, Bottom):
        return "false"
    if isinstance(f, Implies):
        return f"({print_formula(f.left)} -> {print_formula(f.right)})"
    if isinstance(f, Until):
        return f"({print_formula(f.left)} U {print_formula(f.right)})"
    if isinstance(f, Next):
        return f"X {print_formula(f.arg)}"
    if isinstance(f, Just):
        return f"[{print_term(f.term)}]_{f.agent} {print_formula(f.body)}"
    raise TypeError(f"not a formula: {f!r}")


def pretty(f: Formula) -> str:
    """Human-oriented printing that folds the usual abbreviations back in.

    The output re-parses to the same core formula.
    """
    if f == TOP:
        return "true"
    b = unbox(f)
    if b is not None:
        return f"G {pretty(b)}"
    c = unconj(f)
    if c is not None:
        return f"({pretty(c[0])} & {pretty(c[1])})"
    n = unneg(f)
    if n is not None:
        return f"~{pretty(n)}"
    d = undiamond(f)
    if d is not None:
        return f"F {pretty(d)}"
    if isinstance(f, Implies):
        return f"({pretty(f.left)} -> {pretty(f.right)})"
    if isinstance(f, Until):
        return f"({pretty(f.left)} U {pretty(f.right)})"
    if isinstance(f, Next):
        return f"X {pretty(f.arg)}"
    if isinstance(f, Just):
        return f"[{print_term(f.term)}]_{f.agent} {pretty(f.body)}"
    return print_formula(f)


# ---------------------------------------------------------------------------
# Parsing

_UNICODE = {
    "¬": "~", "∧": "&", "∨": "|", "→": "->", "↔": "<->", "○": "X", "◯": "X",
    "□": "G", "◇": "F", "⊥": "false", "⊤": "true", "𝒰": "U", "⋆": "*",
    "·": ".", "⇓": "dn", "⇑": "up", "⇛": "rr", "⇚": "ll", "⟦": "[", "⟧": "]",
}
_SUBSCRIPTS = str.maketrans("₀₁₂₃₄₅₆₇₈₉", "0123456789")

_TOKEN = re.compile(
    r"\s*(?:(?P<ident>[A-Za-z][A-Za-z0-9_']*)|(?P<nat>\d+)|(?P<sub>[₀-₉]+)"
    r"|(?P<sym><->|->|[~&|()\[\]_!*+.])|(?P<uni>[¬∧∨→↔○◯□◇⊥⊤𝒰⋆·⇓⇑⇛⇚⟦⟧]))"
)

_FORMULA_KEYWORDS = {"false", "true", "X", "G", "F", "U"}
_TERM_KEYWORDS = {"dn": Down, "up": Up, "rr": RArr, "ll": LArr}


@dataclass
class _Tok:
    kind: str
    text: str
    pos: int


def _tokenize(text: str) -> list[_Tok]:
    toks: list[_Tok] = []
    pos = 0
    n = len(text)
    while pos < n:
        m = _TOKEN.match(text, pos)
        if m is None or m.end() == pos:
            if text[pos:].strip() == "":
                break
            raise ParseError(f"unexpected character {text[pos]!r}", pos)
        kind = m.lastgroup
        val = m.group(kind)
        start = m.start(kind)
        if kind == "uni":
            val = _UNICODE[val]
            kind = "ident" if val[0].isalpha() else "sym"
        elif kind == "sub":
            val = val.translate(_SUBSCRIPTS)
        toks.append(_Tok(kind, val, start))
        pos = m.end()
    toks.append(_Tok("eof", "", n))
    return toks


@dataclass
class _Parser:
    toks: list[_Tok]
    agents: int | None
    ops: set[type]
    i: int = 0
    variant_name: str = field(default="")

    def peek(self) -> _Tok:
        return self.toks[self.i]

    def take(self) -> _Tok:
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def expect(self, text: str) -> _Tok:
        tok = self.peek()
        if tok.kind == "eof" or tok.text != text or tok.kind not in ("sym", "ident"):
            raise ParseError(f"unexpected {tok.text or 'end of input'!r}", tok.pos, (repr(text),))
        return self.take()

    def at(self, *texts: str) -> bool:
        tok = self.peek()
        return tok.kind in ("sym", "ident") and tok.text in texts

    # formulas, lowest precedence first

    def formula(self) -> Formula:
        return self.iff()

    def iff(self) -> Formula:
        left = self.impl()
        if self.at("<->"):
            self.take()
            return iff(left, self.iff())
        return left

    def impl(self) -> Formula:
        left = self.disj()
        if self.at("->"):
            self.take()
            return Implies(left, self.impl())
        return left

    def disj(self) -> Formula:
        left = self.conj()
        if self.at("|"):
            self.take()
            return disj(left, self.disj())
        return left

    def conj(self) -> Formula:
        left = self.until()
        if self.at("&"):
            self.take()
            return conj(left, self.conj())
        return left

    def until(self) -> Formula:
        left = self.unary()
        if self.at("U"):
            self.take()
            return Until(left, self.until())
        return left

    def unary(self) -> Formula:
        tok = self.peek()
        if tok.kind == "sym":
            if tok.text == "~":
                self.take()
                return neg(self.unary())
            if tok.text == "(":
                self.take()
                f = self.formula()
                self.expect(")")
                return f
            if tok.text == "[":
                self.take()
                t = self.term()
                self.expect("]")
                agent = self.agent_index()
                return Just(t, agent, self.unary())
        elif tok.kind == "ident":
            if tok.text == "X":
                self.take()
                return Next(self.unary())
            if tok.text == "G":
                self.take()
                return box(self.unary())
            if tok.text == "F":
                self.take()
                return diamond(self.unary())
            if tok.text == "false":
                self.take()
                return BOT
            if tok.text == "true":
                self.take()
                return TOP
            if tok.text not in _FORMULA_KEYWORDS:
                self.take()
                return Prop(tok.text)
        raise ParseError(
            f"unexpected {tok.text or 'end of input'!r}",
            tok.pos,
            ("proposition", "false", "true", "~", "X", "G", "F", "[", "("),
        )

    def agent_index(self) -> int:
        tok = self.peek()
        if tok.kind == "sub":
            self.take()
        else:
            self.expect("_")
            tok = self.peek()
            if tok.kind != "nat":
                raise ParseError("missing agent index", tok.pos, ("agent number",))
            self.take()
        i = int(tok.text)
        if i < 1 or (self.agents is not None and i > self.agents):
            raise AgentOutOfRange(f"agent {i} out of range 1..{self.agents} at position {tok.pos}")
        return i

    # terms: '+' binds weaker than '.', both left-associative

    def term(self) -> Term:
        left = self.term_prod()
        while self.at("+"):
            self.take()
            left = Sum(left, self.term_prod())
        return left

    def term_prod(self) -> Term:
        left = self.term_unary()
        while self.at("."):
            self.take()
            left = App(left, self.term_unary())
        return left

    def term_unary(self) -> Term:
        tok = self.peek()
        cls = None
        if tok.kind == "sym" and tok.text == "!":
            cls = Bang
        elif tok.kind == "sym" and tok.text == "*":
            cls = Star
        elif tok.kind == "ident" and tok.text in _TERM_KEYWORDS:
            cls = _TERM_KEYWORDS[tok.text]
        if cls is not None:
            if cls not in self.ops:
                raise VariantError(
                    f"term operator {UNARY_TERM_OPS[cls][0]!r} at position {tok.pos} "
                    f"not available in {self.variant_name}"
                )
            self.take()
            return cls(self.term_unary())
        if tok.kind == "sym" and tok.text == "(":
            self.take()
            t = self.term()
            self.expect(")")
            return t
        if tok.kind == "ident":
            self.take()
            if tok.text.startswith("c"):
                return Const(tok.text)
            if tok.text.startswith("x"):
                return Var(tok.text)
            raise ParseError(f"term name {tok.text!r} must start with 'c' or 'x'", tok.pos)
        raise ParseError(
            f"unexpected {tok.text or 'end of input'!r}",
            tok.pos,
            ("constant", "variable", "!", "*", "(", "dn", "up", "rr", "ll"),
        )


def _parser(text: str, agents: int | None, variant: Variant | None, experimental: bool) -> _Parser:
    return _Parser(
        _tokenize(text),
        agents,
        allowed_term_ops(variant, experimental),
        variant_name=variant.value if variant else "",
    )


def _finish(p: _Parser) -> None:
    tok = p.peek()
    if tok.kind != "eof":
        raise ParseError(f"trailing input {tok.text!r}", tok.pos, ("end of input",))


def parse_formula(
    text: str,
    agents: int | None = 2,
    variant: Variant | None = None,
    experimental: bool = False,
) -> Formula:
    p = _parser(text, agents, variant, experimental)
    f = p.formula()
    _finish(p)
    return f


def parse_term(
    text: str,
    variant: Variant | None = None,
    experimental: bool = False,
) -> Term:
    p = _parser(text, None, variant, experimental)
    t = p.term()
    _finish(p)
    return t
