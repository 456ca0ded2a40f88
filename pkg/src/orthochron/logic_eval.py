r"""Propositional formulas over process atoms, with two semantics: Boolean
over time points of a timed trace, and orthologic over closed process sets
of a causal structure.

Grammar (recursive descent, ASCII synonyms accepted)::

    formula := or
    or      := and { ("|" | "\/" | "or") and }
    and     := not { ("&" | "/\" | "and") not }
    not     := ("~" | "!" | "not") not | atom
    atom    := NAME | "0" | "1" | "(" formula ")"

Precedence is not > and > or, both binary operators left-associative.
Under Boolean semantics an atom denotes the set of time points its process
belongs to; negation is set complement.  Under orthologic semantics an atom
denotes the closure of its singleton; negation is the orthocomplement and
disjunction is the lattice join, so a formula's value is always closed.
"""

from __future__ import annotations

import itertools
import random
import re
from dataclasses import dataclass

from .causal_core import CausalStructure, happened_before
from .chronology import TimeLine, time_points
from .ortholattice import ortho_mask
from .trace_model import Trace

__all__ = [
    "Formula",
    "Atom",
    "Not",
    "And",
    "Or",
    "Bottom",
    "Top",
    "FormulaSyntaxError",
    "parse_formula",
    "format_formula",
    "eval_boolean",
    "eval_ortho",
    "compare_laws",
    "LawComparison",
    "EXHAUSTIVE_LIMIT",
]


class Formula:
    """Base class of formula nodes."""


@dataclass(frozen=True)
class Atom(Formula):
    name: str


@dataclass(frozen=True)
class Not(Formula):
    child: Formula


@dataclass(frozen=True)
class And(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Or(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Bottom(Formula):
    pass


@dataclass(frozen=True)
class Top(Formula):
    pass


class FormulaSyntaxError(ValueError):
    def __init__(self, message: str, position: int):
        super().__init__(f"position {position}: {message}")
        self.position = position


_FORMULA_TOKEN = re.compile(r"(?P<name>[A-Za-z_][A-Za-z0-9_]*)|(?P<op>/\\|\\/|[~!&|()01])")

_WORD_KINDS = {"not": "not", "and": "and", "or": "or"}
_SYMBOL_KINDS = {
    "~": "not",
    "!": "not",
    "&": "and",
    "/\\": "and",
    "|": "or",
    "\\/": "or",
    "(": "lparen",
    ")": "rparen",
    "0": "bottom",
    "1": "top",
}


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        if text[pos].isspace():
            pos += 1
            continue
        match = _FORMULA_TOKEN.match(text, pos)
        if match is None:
            raise FormulaSyntaxError(f"unexpected character {text[pos]!r}", pos + 1)
        value = match.group()
        if match.lastgroup == "name":
            kind = _WORD_KINDS.get(value, "atom")
        else:
            kind = _SYMBOL_KINDS[value]
        tokens.append((kind, value, pos + 1))
        pos = match.end()
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.end_position = len(text) + 1
        self.cursor = 0

    def peek(self) -> str | None:
        if self.cursor < len(self.tokens):
            return self.tokens[self.cursor][0]
        return None

    def advance(self) -> tuple[str, str, int]:
        token = self.tokens[self.cursor]
        self.cursor += 1
        return token

    def fail(self, message: str):
        if self.cursor < len(self.tokens):
            _, value, position = self.tokens[self.cursor]
            raise FormulaSyntaxError(f"{message}, found {value!r}", position)
        raise FormulaSyntaxError(f"{message} at end of input", self.end_position)

    def parse_or(self) -> Formula:
        node = self.parse_and()
        while self.peek() == "or":
            self.advance()
            node = Or(node, self.parse_and())
        return node

    def parse_and(self) -> Formula:
        node = self.parse_not()
        while self.peek() == "and":
            self.advance()
            node = And(node, self.parse_not())
        return node

    def parse_not(self) -> Formula:
        if self.peek() == "not":
            self.advance()
            return Not(self.parse_not())
        return self.parse_atom()

    def parse_atom(self) -> Formula:
        kind = self.peek()
        if kind == "atom":
            return Atom(self.advance()[1])
        if kind == "bottom":
            self.advance()
            return Bottom()
        if kind == "top":
            self.advance()
            return Top()
        if kind == "lparen":
            self.advance()
            node = self.parse_or()
            if self.peek() != "rparen":
                self.fail("expected ')'")
            self.advance()
            return node
        self.fail("expected an atom, '0', '1', '(' or a negation")
        raise AssertionError("unreachable")


def parse_formula(text: str) -> Formula:
    parser = _Parser(text)
    node = parser.parse_or()
    if parser.peek() is not None:
        parser.fail("unexpected trailing input")
    return node


def format_formula(formula: Formula) -> str:
    """Render with the canonical ~ & | spelling and minimal parentheses."""

    def go(node: Formula, needed: int) -> str:
        if isinstance(node, Atom):
            return node.name
        if isinstance(node, Bottom):
            return "0"
        if isinstance(node, Top):
            return "1"
        if isinstance(node, Not):
            text, precedence = "~" + go(node.child, 3), 3
        elif isinstance(node, And):
            text, precedence = f"{go(node.left, 2)} & {go(node.right, 3)}", 2
        elif isinstance(node, Or):
            text, precedence = f"{go(node.left, 1)} | {go(node.right, 2)}", 1
        else:
            raise TypeError(f"not a formula node: {node!r}")
        return f"({text})" if precedence < needed else text

    return go(formula, 0)


def eval_boolean(formula: Formula, timeline: TimeLine) -> frozenset[int]:
    """Set of time point indices at which the formula holds."""
    universe = frozenset(range(len(timeline)))

    def go(node: Formula) -> frozenset[int]:
        if isinstance(node, Atom):
            try:
                return timeline.interval(node.name)
            except KeyError:
                raise ValueError(f"unknown atom {node.name!r}") from None
        if isinstance(node, Not):
            return universe - go(node.child)
        if isinstance(node, And):
            return go(node.left) & go(node.right)
        if isinstance(node, Or):
            return go(node.left) | go(node.right)
        if isinstance(node, Bottom):
            return frozenset()
        if isinstance(node, Top):
            return universe
        raise TypeError(f"not a formula node: {node!r}")

    return go(formula)


def eval_ortho(formula: Formula, cs: CausalStructure) -> frozenset[str]:
    """Closed process set denoted by the formula."""

    def go(node: Formula) -> int:
        if isinstance(node, Atom):
            try:
                bit = 1 << cs.ordinal(node.name)
            except KeyError:
                raise ValueError(f"unknown atom {node.name!r}") from None
            return ortho_mask(cs, ortho_mask(cs, bit))
        if isinstance(node, Not):
            return ortho_mask(cs, go(node.child))
        if isinstance(node, And):
            return go(node.left) & go(node.right)
        if isinstance(node, Or):
            return ortho_mask(cs, ortho_mask(cs, go(node.left)) & ortho_mask(cs, go(node.right)))
        if isinstance(node, Bottom):
            return 0
        if isinstance(node, Top):
            return cs.full_mask
        raise TypeError(f"not a formula node: {node!r}")

    return cs.names_of(go(formula))


EXHAUSTIVE_LIMIT = 10_000


@dataclass(frozen=True)
class LawComparison:
    """Result of instantiating an identity over a trace's atoms."""

    lhs: str
    rhs: str
    semantics: str
    holds: bool
    exhaustive: bool
    checked: int
    total: int
    counterexample: dict[str, str] | None = None
    lhs_value: frozenset | None = None
    rhs_value: frozenset | None = None


def _metavariables(*formulas: Formula) -> list[str]:
    seen: dict[str, None] = {}

    def walk(node: Formula):
        if isinstance(node, Atom):
            seen.setdefault(node.name)
        elif isinstance(node, Not):
            walk(node.child)
        elif isinstance(node, (And, Or)):
            walk(node.left)
            walk(node.right)

    for formula in formulas:
        walk(formula)
    return list(seen)


def _substitute(node: Formula, mapping: dict[str, str]) -> Formula:
    if isinstance(node, Atom):
        return Atom(mapping[node.name])
    if isinstance(node, Not):
        return Not(_substitute(node.child, mapping))
    if isinstance(node, And):
        return And(_substitute(node.left, mapping), _substitute(node.right, mapping))
    if isinstance(node, Or):
        return Or(_substitute(node.left, mapping), _substitute(node.right, mapping))
    return node


def compare_laws(
    trace: Trace,
    identity: tuple[str, str],
    semantics: str = "ortho",
    trials: int = 1000,
    seed: int = 0,
) -> LawComparison:
    """Instantiate the identity's metavariables with the trace's atoms and
    compare both sides under the requested semantics.

    Runs exhaustively when the instantiation count is at most
    EXHAUSTIVE_LIMIT, otherwise samples ``trials`` assignments from
    ``random.Random(seed)``; the report says which happened.
    """
    lhs_source, rhs_source = identity
    lhs = parse_formula(lhs_source)
    rhs = parse_formula(rhs_source)
    metavars = _metavariables(lhs, rhs)
    atoms = list(trace.names)

    if semantics == "ortho":
        cs = happened_before(trace)

        def evaluate(node: Formula):
            return eval_ortho(node, cs)

    elif semantics == "boolean":
        timeline = time_points(trace)

        def evaluate(node: Formula):
            return eval_boolean(node, timeline)

    else:
        raise ValueError(f"unknown semantics {semantics!r}")

    total = len(atoms) ** len(metavars)
    exhaustive = total <= EXHAUSTIVE_LIMIT
    if exhaustive:
        assignments = itertools.product(atoms, repeat=len(metavars))
    else:
        rng = random.Random(seed)
        assignments = (
            tuple(rng.choice(atoms) for _ in metavars) for _ in range(trials)
        )

    checked = 0
    for combo in assignments:
        mapping = dict(zip(metavars, combo))
        left = evaluate(_substitute(lhs, mapping))
        right = evaluate(_substitute(rhs, mapping))
        checked += 1
        if left != right:
            return LawComparison(
                lhs_source,
                rhs_source,
                semantics,
                holds=False,
                exhaustive=exhaustive,
                checked=checked,
                total=total,
                counterexample=mapping,
                lhs_value=left,
                rhs_value=right,
            )
    return LawComparison(
        lhs_source,
        rhs_source,
        semantics,
        holds=True,
        exhaustive=exhaustive,
        checked=checked,
        total=total,
    )
