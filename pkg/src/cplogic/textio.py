"""Concrete syntax: theory files, story files, formulas and DOT export.

Theory files (``.cpl``) are line oriented:

    % comment until end of line
    exogenous throws_suzy, throws_billy.
    @suzy: shatters:0.9 <- throws_suzy.
    burn <- match1, match2.
    antidote:*.

One statement per line. A law is ``[@label:] head [<- body] .`` where the
head lists ``atom[:prob]`` alternatives separated by ``;`` (a missing
annotation means probability 1), and the body is a comma-separated
conjunction of literals (``~`` negates). Probabilities are decimals,
``num/den`` rationals, or ``*`` for an unknown value (stored as 1/2 and
flagged). Decimals are parsed as exact rationals, never floats.

Story files (``.story``) start with one context line and then one line
per event, in order:

    context throws_suzy, throws_billy.
    r1 -> shatters.
    r2 -> none.

Formulas use ``!`` (or ``~``) for negation, ``&``, ``|``, parentheses and
the constants ``true``/``false``, with the usual precedence.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import AbstractSet

from .core import (
    TRUE,
    FALSE,
    Atom,
    Conjunction,
    CPLaw,
    Disjunction,
    Formula,
    FormulaAtom,
    HeadAlternative,
    Literal,
    Negation,
    Probability,
    Theory,
    validate_theory,
)
from .engine import (
    NO_EFFECT,
    Branch,
    ExecutionTree,
    outcome_probability,
)
from .errors import (
    NoEffectNotAllowedError,
    OutcomeNotInHeadError,
    ParseError,
    UnknownLabelError,
)

_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")
_NUMBER = re.compile(r"\d+\.\d+|\d+\s*/\s*\d+|\d+")


class _Scanner:
    """Minimal cursor over one statement, tracking the source position."""

    def __init__(self, text: str, line: int = 1):
        self.text = text
        self.pos = 0
        self.line = line

    def error(self, message: str) -> ParseError:
        return ParseError(message, self.line, self.pos + 1)

    def skip_ws(self) -> None:
        while self.pos < len(self.text) and self.text[self.pos] in " \t\r\n":
            self.pos += 1

    def at_end(self) -> bool:
        self.skip_ws()
        return self.pos >= len(self.text)

    def peek(self) -> str:
        self.skip_ws()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def try_symbol(self, symbol: str) -> bool:
        self.skip_ws()
        if self.text.startswith(symbol, self.pos):
            self.pos += len(symbol)
            return True
        return False

    def expect_symbol(self, symbol: str) -> None:
        if not self.try_symbol(symbol):
            raise self.error(f"expected {symbol!r}")

    def ident(self, what: str = "identifier") -> str:
        self.skip_ws()
        match = _IDENT.match(self.text, self.pos)
        if not match:
            raise self.error(f"expected {what}")
        self.pos = match.end()
        return match.group()

    def try_keyword(self, word: str) -> bool:
        self.skip_ws()
        match = _IDENT.match(self.text, self.pos)
        if match and match.group() == word:
            self.pos = match.end()
            return True
        return False

    def atom(self) -> Atom:
        self.skip_ws()
        start = self.pos
        name = self.ident("atom")
        try:
            return Atom(name)
        except ValueError as exc:
            self.pos = start
            raise self.error(str(exc)) from None

    def probability(self) -> tuple[Probability, bool]:
        if self.try_symbol("*"):
            return Fraction(1, 2), True
        self.skip_ws()
        match = _NUMBER.match(self.text, self.pos)
        if not match:
            raise self.error("expected a probability (decimal, num/den, or *)")
        token = match.group()
        try:
            value = Fraction(token.replace(" ", ""))
        except ZeroDivisionError:
            raise self.error("probability denominator is zero") from None
        if value > 1:
            raise self.error(f"probability {token} exceeds 1")
        self.pos = match.end()
        return value, False


# ---------------------------------------------------------------------------
# Theories


@dataclass(frozen=True)
class TheoryDocument:
    """Parse result: the candidate theory plus per-law source lines."""

    source: str
    theory: Theory
    law_lines: tuple[int, ...]


def _strip_comment(raw: str) -> str:
    return raw.split("%", 1)[0]


def parse_theory(text: str) -> TheoryDocument:
    """Parse theory text into an unvalidated candidate."""
    laws: list[CPLaw] = []
    law_lines: list[int] = []
    exogenous: set[Atom] = set()
    for line_no, raw in enumerate(text.splitlines(), 1):
        content = _strip_comment(raw)
        if not content.strip():
            continue
        sc = _Scanner(content, line_no)
        if sc.try_keyword("exogenous"):
            exogenous.add(sc.atom())
            while sc.try_symbol(","):
                exogenous.add(sc.atom())
            sc.expect_symbol(".")
        else:
            laws.append(_parse_law(sc))
            law_lines.append(line_no)
        if not sc.at_end():
            raise sc.error("unexpected input after '.'")
    return TheoryDocument(text, Theory(tuple(laws), frozenset(exogenous)), tuple(law_lines))


def load_theory(text: str) -> Theory:
    """Parse and validate in one step."""
    return validate_theory(parse_theory(text).theory)


def _parse_law(sc: _Scanner) -> CPLaw:
    label = None
    if sc.try_symbol("@"):
        label = sc.ident("law label")
        sc.expect_symbol(":")
    head = [_parse_alternative(sc)]
    while sc.try_symbol(";"):
        head.append(_parse_alternative(sc))
    body: list[Literal] = []
    if sc.try_symbol("<-"):
        body.append(_parse_body_literal(sc))
        while sc.try_symbol(","):
            body.append(_parse_body_literal(sc))
    sc.expect_symbol(".")
    return CPLaw(tuple(head), tuple(body), label)


def _parse_alternative(sc: _Scanner) -> HeadAlternative:
    atom = sc.atom()
    if sc.try_symbol(":"):
        prob, symbolic = sc.probability()
        return HeadAlternative(atom, prob, symbolic)
    return HeadAlternative(atom, Fraction(1))


def _parse_body_literal(sc: _Scanner) -> Literal:
    if sc.try_symbol("~"):
        return Literal(sc.atom(), False)
    return Literal(sc.atom())


# ---------------------------------------------------------------------------
# Stories


@dataclass(frozen=True)
class StoryStep:
    label: str
    outcome: object  # Atom or NoEffect
    line: int = 0


@dataclass(frozen=True)
class StoryDocument:
    """A parsed story: initial context plus the ordered event steps."""

    context: frozenset
    steps: tuple[StoryStep, ...]


def parse_story(text: str, theory: Theory) -> StoryDocument:
    """Parse a story and resolve its steps against the theory's laws."""
    context: frozenset | None = None
    steps: list[StoryStep] = []
    for line_no, raw in enumerate(text.splitlines(), 1):
        content = _strip_comment(raw)
        if not content.strip():
            continue
        sc = _Scanner(content, line_no)
        if context is None:
            if not sc.try_keyword("context"):
                raise sc.error("a story must start with a 'context' line")
            atoms: set[Atom] = set()
            if not sc.try_symbol("."):
                atoms.add(sc.atom())
                while sc.try_symbol(","):
                    atoms.add(sc.atom())
                sc.expect_symbol(".")
            context = frozenset(atoms)
        else:
            steps.append(_parse_step(sc, theory, line_no))
        if not sc.at_end():
            raise sc.error("unexpected input after '.'")
    if context is None:
        raise ParseError("a story must start with a 'context' line", 1)
    return StoryDocument(context, tuple(steps))


def _parse_step(sc: _Scanner, theory: Theory, line_no: int) -> StoryStep:
    sc.try_symbol("@")
    label = sc.ident("law label")
    sc.expect_symbol("->")
    if label not in theory.labels:
        raise UnknownLabelError(f"unknown law label {label!r} (line {line_no})")
    law = theory.law(label)
    if sc.try_keyword("none"):
        if law.no_effect_prob <= 0:
            raise NoEffectNotAllowedError(
                f"law {label} always has a visible effect (line {line_no})"
            )
        outcome: object = NO_EFFECT
    else:
        atom = sc.atom()
        if atom not in law.head_atoms:
            raise OutcomeNotInHeadError(
                f"{atom} is not a head atom of law {label} (line {line_no})"
            )
        outcome = atom
    sc.expect_symbol(".")
    return StoryStep(label, outcome, line_no)


# ---------------------------------------------------------------------------
# Formulas, contexts, literals


def parse_formula(text: str) -> Formula:
    sc = _Scanner(text)
    if sc.at_end():
        raise ParseError("empty formula", 1, 1)
    formula = _parse_disjunction(sc)
    if not sc.at_end():
        raise sc.error("unexpected trailing input")
    return formula


def _parse_disjunction(sc: _Scanner) -> Formula:
    parts = [_parse_conjunction(sc)]
    while sc.try_symbol("|"):
        parts.append(_parse_conjunction(sc))
    return parts[0] if len(parts) == 1 else Disjunction(tuple(parts))


def _parse_conjunction(sc: _Scanner) -> Formula:
    parts = [_parse_unary(sc)]
    while sc.try_symbol("&"):
        parts.append(_parse_unary(sc))
    return parts[0] if len(parts) == 1 else Conjunction(tuple(parts))


def _parse_unary(sc: _Scanner) -> Formula:
    if sc.try_symbol("!") or sc.try_symbol("~"):
        return Negation(_parse_unary(sc))
    if sc.try_symbol("("):
        inner = _parse_disjunction(sc)
        sc.expect_symbol(")")
        return inner
    if sc.try_keyword("true"):
        return TRUE
    if sc.try_keyword("false"):
        return FALSE
    return FormulaAtom(sc.atom())


def parse_context(text: str) -> frozenset:
    """Comma-separated atom list; the empty string is the empty context."""
    sc = _Scanner(text)
    atoms: set[Atom] = set()
    if sc.at_end():
        return frozenset()
    atoms.add(sc.atom())
    while sc.try_symbol(","):
        atoms.add(sc.atom())
    if not sc.at_end():
        raise sc.error("unexpected trailing input")
    return frozenset(atoms)


def parse_literal(text: str) -> Literal:
    """``atom`` or ``~atom``."""
    sc = _Scanner(text)
    negated = sc.try_symbol("~") or sc.try_symbol("!")
    atom = sc.atom()
    if not sc.at_end():
        raise sc.error("unexpected trailing input")
    return Literal(atom, not negated)


# ---------------------------------------------------------------------------
# Serialization


def _format_prob(alt: HeadAlternative) -> str:
    if alt.symbolic:
        return f"{alt.atom.name}:*"
    if alt.prob == 1:
        return alt.atom.name
    return f"{alt.atom.name}:{alt.prob}"


def format_law(law: CPLaw, include_label: bool = True) -> str:
    head = "; ".join(_format_prob(alt) for alt in law.head)
    body = ", ".join(str(lit) for lit in law.body)
    text = head if not body else f"{head} <- {body}"
    if include_label and law.label is not None:
        return f"@{law.label}: {text}."
    return f"{text}."


def serialize_theory(theory: Theory) -> str:
    """Canonical text form; labels are always written out."""
    lines = []
    if theory.exogenous:
        names = ", ".join(sorted(a.name for a in theory.exogenous))
        lines.append(f"exogenous {names}.")
    lines.extend(format_law(law) for law in theory.laws)
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# DOT export


def _interp_label(interp: AbstractSet[Atom]) -> str:
    return "{" + ", ".join(sorted(a.name for a in interp)) + "}"


def export_tree_dot(tree, theory: Theory | None = None) -> str:
    """Render an execution tree, or a replayed branch, as a DOT digraph.

    Node labels show the true atoms; edge labels show the fired law, the
    realized outcome and its probability.
    """
    lines = ["digraph execution_tree {", "  node [shape=box];"]
    if isinstance(tree, Branch):
        law_of = theory.law if theory is not None else None
        for i, state in enumerate(tree.states):
            lines.append(f'  n{i} [label="{_interp_label(state.interp)}"];')
        for i, event in enumerate(tree.events):
            text = f"{event.label}: {event.outcome}"
            if law_of is not None:
                text += f" {outcome_probability(law_of(event.label), event.outcome)}"
            lines.append(f'  n{i} -> n{i + 1} [label="{text}"];')
    elif isinstance(tree, ExecutionTree):
        counter = 0

        def emit(node) -> int:
            nonlocal counter
            ident = counter
            counter += 1
            lines.append(f'  n{ident} [label="{_interp_label(node.state.interp)}"];')
            for edge in node.edges:
                child = emit(edge.child)
                text = f"{node.law.label}: {edge.outcome} {edge.prob}"
                lines.append(f'  n{ident} -> n{child} [label="{text}"];')
            return ident

        emit(tree.root)
    else:
        raise TypeError(f"cannot export {type(tree).__name__} as DOT")
    lines.append("}")
    return "\n".join(lines) + "\n"
