"""Actual-causation queries over branches of execution trees.

The complete-information check asks: in the story that actually took
place, would the effect still have had nonzero probability once the
cause is prevented? Three theory transformations make that precise:

* ``fix_story`` freezes every fired event to its realized outcome,
* ``prevent`` deletes an atom from every head it appears in,
* ``force`` adds a vacuous deterministic law for an atom (used when the
  candidate cause is the *absence* of an atom).

Relevance filtering happens first: only events that fired before the
effect arose, plus laws that were already impossible by then, take part
in the counterfactual. The partial-information check runs the complete
check over every branch that could have produced an observed final
state and reports whether the candidate is a cause in all, some, or
none of them.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from typing import AbstractSet, Iterable, Mapping, Sequence

from .core import (
    Atom,
    CPLaw,
    HeadAlternative,
    Literal,
    Probability,
    Theory,
    literal_formula,
)
from .engine import (
    NO_EFFECT,
    Branch,
    LawStatus,
    enumerate_branches,
    law_status,
    prob_formula,
)
from .errors import (
    BranchTheoryMismatchError,
    EffectNeverHoldsError,
    ExogenousForcedError,
    PreconditionNotInFinalStateError,
    SelfCauseQueryError,
    UnknownAtomError,
)


@dataclass(frozen=True)
class CauseQuery:
    """A candidate cause and an effect, both literals."""

    cause: Literal
    effect: Literal

    def __post_init__(self):
        if self.cause == self.effect:
            raise SelfCauseQueryError(
                f"cause and effect are the same literal: {self.cause}"
            )


@dataclass(frozen=True)
class Verdict:
    """Outcome of a complete-information query, with its full witness.

    ``is_cause`` holds exactly when ``effect_prob`` is zero: preventing
    the cause in the story-fixed relevant theory leaves no way for the
    effect to occur.
    """

    is_cause: bool
    cut_index: int
    relevant: Theory
    counterfactual: Theory
    context: frozenset
    effect_prob: Probability


class CauseClassification(enum.Enum):
    CERTAIN = "certain"
    POSSIBLE_ONLY = "possible"
    NOT_POSSIBLE = "not-possible"


@dataclass(frozen=True)
class PartialVerdict:
    """Partial-information outcome: cause in all / some / none of the branches."""

    classification: CauseClassification
    supporting: int
    branches: int


# ---------------------------------------------------------------------------
# Theory transformations


def fix_story(theory: Theory, branch: Branch) -> Theory:
    """Freeze the branch's events into the theory.

    Laws that never fired are kept as they are. A law that fired with a
    realized outcome is replaced by the deterministic law producing that
    outcome from the same body. A law that fired without visible effect
    is dropped entirely. Events whose law is not part of ``theory`` are
    ignored, so a branch of a larger theory can be applied to a
    restriction of it.
    """
    realized: dict[str, object] = {}
    for event in branch.events:
        if event.label not in theory.labels:
            continue
        law = theory.law(event.label)
        if event.label in realized:
            raise BranchTheoryMismatchError(
                f"law {event.label} fires twice in the branch"
            )
        if event.outcome is not NO_EFFECT and event.outcome not in law.head_atoms:
            raise BranchTheoryMismatchError(
                f"branch realizes {event.outcome} which law {event.label} cannot produce"
            )
        realized[event.label] = event.outcome

    laws = []
    for law in theory.laws:
        if law.label not in realized:
            laws.append(law)
            continue
        outcome = realized[law.label]
        if outcome is NO_EFFECT:
            continue
        laws.append(CPLaw(
            (HeadAlternative(outcome, Fraction(1)),), law.body, law.label
        ))
    return Theory(tuple(laws), theory.exogenous)


def prevent(theory: Theory, atom: Atom) -> Theory:
    """Delete the atom from every head it appears in.

    Remaining head probabilities are kept as they are (not
    renormalized); the freed mass becomes a no-effect possibility. Laws
    whose head becomes empty disappear.
    """
    laws = []
    for law in theory.laws:
        kept = tuple(alt for alt in law.head if alt.atom is not atom)
        if len(kept) == len(law.head):
            laws.append(law)
        elif kept:
            laws.append(CPLaw(kept, law.body, law.label))
    return Theory(tuple(laws), theory.exogenous)


def force(theory: Theory, atom: Atom) -> Theory:
    """Append a vacuous deterministic law making the atom true."""
    if atom in theory.exogenous:
        raise ExogenousForcedError(
            f"{atom} is exogenous; set it in the initial context instead"
        )
    base = f"force_{atom.name}"
    label, k = base, 2
    existing = set(theory.labels)
    while label in existing:
        label = f"{base}_{k}"
        k += 1
    forced = CPLaw((HeadAlternative(atom, Fraction(1)),), (), label)
    return Theory(theory.laws + (forced,), theory.exogenous)


# ---------------------------------------------------------------------------
# Dependency and relevance


def _require_holds(lits: Iterable[Literal], interp: AbstractSet[Atom]) -> None:
    for lit in lits:
        if not lit.holds_in(interp):
            raise PreconditionNotInFinalStateError(
                f"{lit} does not hold in the branch's final state"
            )


def _counterfactual_setup(
    theory: Theory, fixed: Theory, initial: frozenset, cause: Literal
) -> tuple[Theory, frozenset]:
    """Prevent (or force) the cause and adjust the initial context."""
    if cause.positive:
        return prevent(fixed, cause.atom), initial - {cause.atom}
    if cause.atom in theory.exogenous:
        return fixed, initial | {cause.atom}
    return force(fixed, cause.atom), initial


def counterfactual_dependency(
    theory: Theory, branch: Branch, cause: Literal, effect: Literal
) -> bool:
    """Does preventing the cause in the story-fixed theory zero the effect?

    No relevance filtering here: the whole theory is fixed to the
    branch. Used on its own this over-reports non-causation whenever a
    redundant mechanism would have produced the effect anyway.
    """
    _require_holds((cause, effect), branch.final_state.interp)
    fixed = fix_story(theory, branch)
    twisted, context = _counterfactual_setup(
        theory, fixed, branch.states[0].interp, cause
    )
    prob = prob_formula(
        twisted, context, literal_formula(effect), vocabulary=theory.vocabulary
    )
    return prob == 0


def effect_index(branch: Branch, effect: Literal) -> int:
    """First state index where the effect holds.

    For a positive literal that is the state where the atom became true;
    for a negative literal, the state where the atom dropped out of the
    overestimate, i.e. stopped being causable.
    """
    for k, state in enumerate(branch.states):
        if effect.positive:
            if effect.atom in state.interp:
                return k
        else:
            if effect.atom not in state.over:
                return k
    raise EffectNeverHoldsError(f"{effect} never starts to hold along the branch")


def relevant_theory(theory: Theory, branch: Branch, effect: Literal) -> Theory:
    """The laws that matter for how the effect came about.

    Keeps the laws that fired strictly before the effect arose and the
    laws that were already impossible by then. For a positive effect
    impossibility is judged in the state the effect-producing event
    fired from; for a negative effect, in the state where the atom left
    the overestimate (the moment the absence became settled). Law
    objects are shared with the input theory, not copied.
    """
    j = effect_index(branch, effect)
    fired_before = {event.label for event in branch.events[:j]}
    cut = branch.states[j] if not effect.positive else branch.states[max(j - 1, 0)]
    keep = []
    for law in theory.laws:
        if law.label in fired_before:
            keep.append(law)
        elif law_status(theory, cut, law) is LawStatus.IMPOSSIBLE:
            keep.append(law)
    return Theory(tuple(keep), theory.exogenous)


# ---------------------------------------------------------------------------
# Verdicts


def actual_cause(theory: Theory, branch: Branch, query: CauseQuery) -> Verdict:
    """Complete-information check of one cause/effect pair on one branch."""
    _require_holds((query.cause, query.effect), branch.final_state.interp)
    j = effect_index(branch, query.effect)
    relevant = relevant_theory(theory, branch, query.effect)
    fixed = fix_story(relevant, branch)
    counterfactual, context = _counterfactual_setup(
        theory, fixed, branch.states[0].interp, query.cause
    )
    prob = prob_formula(
        counterfactual,
        context,
        literal_formula(query.effect),
        vocabulary=theory.vocabulary,
    )
    return Verdict(prob == 0, j, relevant, counterfactual, context, prob)


def default_candidates(
    theory: Theory, final_interp: AbstractSet[Atom], effect: Literal
) -> tuple[Literal, ...]:
    """Every literal that holds in the final state, except the effect itself."""
    positives = [Literal(atom) for atom in sorted(final_interp)]
    negatives = [
        Literal(atom, False) for atom in sorted(theory.vocabulary - final_interp)
    ]
    return tuple(lit for lit in positives + negatives if lit != effect)


def classify_causes(
    theory: Theory,
    final_interp: AbstractSet[Atom],
    effect: Literal,
    candidates: Sequence[Literal] | None = None,
    context: AbstractSet[Atom] | None = None,
) -> Mapping[Literal, PartialVerdict]:
    """Partial-information verdict for each candidate.

    Enumerates every branch that ends in the observed final state (the
    exogenous context is read off that state unless given explicitly)
    and runs the complete-information check per branch. A candidate is a
    certain cause when every branch agrees, a possible one when at least
    one does.
    """
    final_interp = frozenset(final_interp)
    unknown = final_interp - theory.vocabulary
    if unknown:
        names = ", ".join(sorted(a.name for a in unknown))
        raise UnknownAtomError(f"final state mentions unknown atoms: {names}")
    if not effect.holds_in(final_interp):
        raise PreconditionNotInFinalStateError(
            f"{effect} does not hold in the observed final state"
        )
    if context is None:
        context = final_interp & theory.exogenous
    branches = list(enumerate_branches(theory, context, target=final_interp))

    if candidates is None:
        candidates = default_candidates(theory, final_interp, effect)
    else:
        for lit in candidates:
            if lit == effect:
                raise SelfCauseQueryError(
                    f"candidate {lit} is the effect itself"
                )

    verdicts: dict[Literal, PartialVerdict] = {}
    for cand in candidates:
        if not cand.holds_in(final_interp):
            verdicts[cand] = PartialVerdict(
                CauseClassification.NOT_POSSIBLE, 0, len(branches)
            )
            continue
        supporting = sum(
            1
            for b in branches
            if actual_cause(theory, b, CauseQuery(cand, effect)).is_cause
        )
        if branches and supporting == len(branches):
            kind = CauseClassification.CERTAIN
        elif supporting:
            kind = CauseClassification.POSSIBLE_ONLY
        else:
            kind = CauseClassification.NOT_POSSIBLE
        verdicts[cand] = PartialVerdict(kind, supporting, len(branches))
    return verdicts
