"""Core domain types for ground CP-logic theories.

Atoms, literals, annotated heads, laws, theories and propositional
formulas, plus structural validation. Every value is immutable after
construction and safe to share; validation is a pure function.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, replace
from fractions import Fraction
from functools import cached_property
from typing import AbstractSet

from .errors import UnknownAtomError, UnknownLabelError, ValidationError

# Exact rational probability. Fraction keeps values reduced to lowest
# terms with a positive denominator, which the engine's exact zero tests
# depend on; no floats appear anywhere in the semantics.
Probability = Fraction

_ATOM_NAME = re.compile(r"[a-z][A-Za-z0-9_]*\Z")

#: Words with grammar meaning; they can never name an atom.
RESERVED_WORDS = frozenset({"exogenous", "context", "none", "true", "false"})


class Atom:
    """An interned propositional atom.

    Construction returns the unique instance for a given name, so atoms
    compare (and hash) by plain object identity.
    """

    __slots__ = ("name",)

    _interned: dict[str, "Atom"] = {}

    def __new__(cls, name: str) -> "Atom":
        atom = cls._interned.get(name)
        if atom is None:
            if not isinstance(name, str) or not _ATOM_NAME.match(name):
                raise ValueError(
                    f"invalid atom name {name!r}: expected a lowercase-leading identifier"
                )
            if name in RESERVED_WORDS:
                raise ValueError(f"invalid atom name {name!r}: reserved word")
            atom = object.__new__(cls)
            object.__setattr__(atom, "name", name)
            cls._interned[name] = atom
        return atom

    def __setattr__(self, attr, value):
        raise AttributeError("atoms are immutable")

    def __repr__(self) -> str:
        return f"Atom({self.name!r})"

    def __str__(self) -> str:
        return self.name

    def __lt__(self, other: "Atom") -> bool:
        return self.name < other.name

    def __reduce__(self):
        return (Atom, (self.name,))

    def __copy__(self):
        return self

    def __deepcopy__(self, memo):
        return self


#: An interpretation: the set of true atoms, everything else false.
Interpretation = frozenset


@dataclass(frozen=True)
class Literal:
    """An atom or its negation, as used in law bodies and cause/effect queries."""

    atom: Atom
    positive: bool = True

    def holds_in(self, interp: AbstractSet[Atom]) -> bool:
        return (self.atom in interp) == self.positive

    def complement(self) -> "Literal":
        return Literal(self.atom, not self.positive)

    def __str__(self) -> str:
        return self.atom.name if self.positive else f"~{self.atom.name}"


@dataclass(frozen=True)
class HeadAlternative:
    """One possible outcome of a law's event, with its exact probability.

    ``symbolic`` marks probabilities that were written as ``*`` in the
    source: unknown values encoded as 1/2. Causation verdicts only ever
    look at whether probability mass is zero, so the placeholder value
    does not influence them.
    """

    atom: Atom
    prob: Probability
    symbolic: bool = False


@dataclass(frozen=True)
class CPLaw:
    """A causal probabilistic law.

    When the body holds, a one-shot event fires and realizes at most one
    head alternative. If the head probabilities sum to less than one,
    the event may also fire without any visible effect. ``label`` is
    None until validation assigns one.
    """

    head: tuple[HeadAlternative, ...]
    body: tuple[Literal, ...] = ()
    label: str | None = None

    def __post_init__(self):
        if not self.head:
            raise ValueError("a law needs at least one head alternative")

    @cached_property
    def head_atoms(self) -> frozenset[Atom]:
        return frozenset(alt.atom for alt in self.head)

    @cached_property
    def head_sum(self) -> Probability:
        return sum((alt.prob for alt in self.head), Fraction(0))

    @property
    def no_effect_prob(self) -> Probability:
        return Fraction(1) - self.head_sum

    @cached_property
    def positive_body(self) -> frozenset[Atom]:
        return frozenset(lit.atom for lit in self.body if lit.positive)

    @cached_property
    def negative_body(self) -> frozenset[Atom]:
        return frozenset(lit.atom for lit in self.body if not lit.positive)

    def with_label(self, label: str) -> "CPLaw":
        return replace(self, label=label)


@dataclass(frozen=True)
class Theory:
    """A finite, ordered set of laws plus the declared exogenous atoms."""

    laws: tuple[CPLaw, ...] = ()
    exogenous: frozenset[Atom] = frozenset()

    @cached_property
    def vocabulary(self) -> frozenset[Atom]:
        atoms = set(self.exogenous)
        for law in self.laws:
            atoms.update(law.head_atoms)
            atoms.update(lit.atom for lit in law.body)
        return frozenset(atoms)

    @cached_property
    def endogenous(self) -> frozenset[Atom]:
        return self.vocabulary - self.exogenous

    @cached_property
    def labels(self) -> tuple[str, ...]:
        return tuple(law.label for law in self.laws if law.label is not None)

    @cached_property
    def _by_label(self) -> dict:
        return {law.label: law for law in self.laws if law.label is not None}

    def law(self, label: str) -> CPLaw:
        try:
            return self._by_label[label]
        except KeyError:
            raise UnknownLabelError(f"unknown law label {label!r}") from None

    @cached_property
    def has_symbolic_probabilities(self) -> bool:
        return any(alt.symbolic for law in self.laws for alt in law.head)


# ---------------------------------------------------------------------------
# Propositional formulas


class Formula:
    """Base class for propositional queries over a theory's vocabulary."""

    __slots__ = ()


@dataclass(frozen=True)
class FormulaAtom(Formula):
    atom: Atom


@dataclass(frozen=True)
class Negation(Formula):
    operand: Formula


@dataclass(frozen=True)
class Conjunction(Formula):
    parts: tuple[Formula, ...]


@dataclass(frozen=True)
class Disjunction(Formula):
    parts: tuple[Formula, ...]


@dataclass(frozen=True)
class Constant(Formula):
    value: bool


TRUE = Constant(True)
FALSE = Constant(False)


def literal_formula(lit: Literal) -> Formula:
    f: Formula = FormulaAtom(lit.atom)
    return f if lit.positive else Negation(f)


def formula_atoms(formula: Formula) -> frozenset[Atom]:
    atoms: set[Atom] = set()
    stack = [formula]
    while stack:
        node = stack.pop()
        if isinstance(node, FormulaAtom):
            atoms.add(node.atom)
        elif isinstance(node, Negation):
            stack.append(node.operand)
        elif isinstance(node, (Conjunction, Disjunction)):
            stack.extend(node.parts)
    return frozenset(atoms)


def eval_formula(
    formula: Formula,
    interp: AbstractSet[Atom],
    vocabulary: AbstractSet[Atom] | None = None,
) -> bool:
    """Two-valued evaluation: atoms outside ``interp`` are false.

    When a vocabulary is given, formula atoms outside it raise
    UnknownAtomError instead of silently evaluating to false.
    """
    if vocabulary is not None:
        missing = formula_atoms(formula) - vocabulary
        if missing:
            names = ", ".join(sorted(a.name for a in missing))
            raise UnknownAtomError(f"formula mentions unknown atoms: {names}")
    return _eval(formula, interp)


def _eval(formula: Formula, interp: AbstractSet[Atom]) -> bool:
    if isinstance(formula, FormulaAtom):
        return formula.atom in interp
    if isinstance(formula, Negation):
        return not _eval(formula.operand, interp)
    if isinstance(formula, Conjunction):
        return all(_eval(part, interp) for part in formula.parts)
    if isinstance(formula, Disjunction):
        return any(_eval(part, interp) for part in formula.parts)
    if isinstance(formula, Constant):
        return formula.value
    raise TypeError(f"not a formula: {formula!r}")


# ---------------------------------------------------------------------------
# Structural validation

ZERO_PROBABILITY = "zero-probability"
HEAD_SUM_EXCEEDS_ONE = "head-sum-exceeds-one"
DUPLICATE_HEAD_ATOM = "duplicate-head-atom"
EXOGENOUS_IN_HEAD = "exogenous-in-head"
DOUBLE_NEGATION_LOOP = "double-negation-loop"
DUPLICATE_LABEL = "duplicate-label"
CONTRADICTORY_BODY = "contradictory-body"


@dataclass(frozen=True)
class ValidationIssue:
    """A single structural problem found while validating a theory."""

    code: str
    message: str
    law_index: int | None = None
    witness: tuple[Atom, ...] = ()


def validate_theory(candidate: Theory) -> Theory:
    """Check every structural invariant and assign missing labels.

    Unlabeled laws get deterministic labels r1..rn by position. Returns
    the input object itself when it is already fully labeled and valid,
    so validation is idempotent. Raises ValidationError carrying the
    full list of problems found.
    """
    issues: list[ValidationIssue] = []

    for idx, law in enumerate(candidate.laws):
        where = f"law {idx + 1}" + (f" ({law.label})" if law.label else "")
        seen: set[Atom] = set()
        for alt in law.head:
            if alt.prob <= 0:
                issues.append(ValidationIssue(
                    ZERO_PROBABILITY,
                    f"{where}: head probability for {alt.atom} must be positive",
                    idx,
                ))
            if alt.atom in seen:
                issues.append(ValidationIssue(
                    DUPLICATE_HEAD_ATOM,
                    f"{where}: atom {alt.atom} appears twice in the head",
                    idx,
                ))
            seen.add(alt.atom)
            if alt.atom in candidate.exogenous:
                issues.append(ValidationIssue(
                    EXOGENOUS_IN_HEAD,
                    f"{where}: exogenous atom {alt.atom} cannot be caused",
                    idx,
                ))
        if law.head_sum > 1:
            issues.append(ValidationIssue(
                HEAD_SUM_EXCEEDS_ONE,
                f"{where}: head probabilities sum to {law.head_sum} > 1",
                idx,
            ))
        contradictory = law.positive_body & law.negative_body
        for atom in sorted(contradictory):
            issues.append(ValidationIssue(
                CONTRADICTORY_BODY,
                f"{where}: body uses both {atom} and ~{atom}",
                idx,
            ))

    explicit: dict[str, int] = {}
    for idx, law in enumerate(candidate.laws):
        if law.label is None:
            continue
        if law.label in explicit:
            issues.append(ValidationIssue(
                DUPLICATE_LABEL,
                f"label {law.label!r} used by laws {explicit[law.label] + 1} and {idx + 1}",
                idx,
            ))
        else:
            explicit[law.label] = idx

    final_labels: list[str] = []
    for idx, law in enumerate(candidate.laws):
        if law.label is not None:
            final_labels.append(law.label)
            continue
        auto = f"r{idx + 1}"
        if auto in explicit:
            issues.append(ValidationIssue(
                DUPLICATE_LABEL,
                f"auto-assigned label {auto!r} for law {idx + 1} collides with an explicit label",
                idx,
            ))
        final_labels.append(auto)

    witness = negation_loop_check(candidate)
    if witness is not None:
        cycle = " -> ".join(a.name for a in witness + (witness[0],))
        issues.append(ValidationIssue(
            DOUBLE_NEGATION_LOOP,
            f"causal feedback through two negations: {cycle}",
            None,
            witness,
        ))

    if issues:
        raise ValidationError(issues)

    if all(law.label is not None for law in candidate.laws):
        return candidate
    relabeled = tuple(
        law if law.label is not None else law.with_label(label)
        for law, label in zip(candidate.laws, final_labels)
    )
    return Theory(relabeled, candidate.exogenous)


def negation_loop_check(theory: Theory) -> tuple[Atom, ...] | None:
    """Look for causal feedback that crosses two or more negations.

    Dependency edges run from each body atom to each head atom and are
    negative when the body literal is negated. Returns the atoms of a
    closed walk that uses at least two distinct negative edges (i.e. a
    strongly connected component containing two of them), or None.
    Feedback through a single negation is left alone.
    """
    succ: dict[Atom, set[Atom]] = {}
    neg_edges: set[tuple[Atom, Atom]] = set()
    for law in theory.laws:
        for lit in law.body:
            for alt in law.head:
                succ.setdefault(lit.atom, set()).add(alt.atom)
                if not lit.positive:
                    neg_edges.add((lit.atom, alt.atom))
    if len(neg_edges) < 2:
        return None

    reach: dict[Atom, frozenset[Atom]] = {
        node: _reachable(succ, node) for node in succ
    }

    def same_scc(u: Atom, v: Atom) -> bool:
        return v in reach.get(u, ()) and u in reach.get(v, ())

    edges = sorted(neg_edges, key=lambda e: (e[0].name, e[1].name))
    for i, (u1, v1) in enumerate(edges):
        if not same_scc(u1, v1):
            continue
        for u2, v2 in edges[i + 1:]:
            if not (same_scc(u1, u2) and same_scc(u2, v2)):
                continue
            # Closed walk: u1 -~-> v1 ... u2 -~-> v2 ... back to u1.
            first = _path(succ, v1, u2)
            second = _path(succ, v2, u1)
            walk = (u1, *first, *second)
            return walk[:-1] if len(walk) > 1 and walk[-1] is walk[0] else walk
    return None


def _reachable(succ: dict, start: Atom) -> frozenset:
    seen = {start}
    stack = [start]
    while stack:
        node = stack.pop()
        for nxt in succ.get(node, ()):
            if nxt not in seen:
                seen.add(nxt)
                stack.append(nxt)
    return frozenset(seen)


def _path(succ: dict, start: Atom, goal: Atom) -> tuple[Atom, ...]:
    """Shortest path from start to goal, endpoints included; BFS."""
    if start is goal:
        return (start,)
    parents = {start: None}
    queue = [start]
    while queue:
        node = queue.pop(0)
        for nxt in sorted(succ.get(node, ()), key=lambda a: a.name):
            if nxt in parents:
                continue
            parents[nxt] = node
            if nxt is goal:
                out = [nxt]
                while parents[out[-1]] is not None:
                    out.append(parents[out[-1]])
                return tuple(reversed(out))
            queue.append(nxt)
    raise AssertionError("no path inside a strongly connected component")
