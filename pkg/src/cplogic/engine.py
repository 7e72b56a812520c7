"""Execution semantics for validated theories.

A state tracks three things: the atoms made true so far, the laws that
have already fired, and a cached overestimate of every atom that can
still be caused. Negation in law bodies is read strongly: ``~a`` holds
in a state only once ``a`` has dropped out of the overestimate, meaning
it can never become true anymore. Trees, branch enumeration, story
replay and probability queries all build on those states; probabilities
are exact rationals throughout.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from typing import TYPE_CHECKING, AbstractSet, Iterator, Sequence

from .core import (
    Atom,
    CPLaw,
    Formula,
    Probability,
    Theory,
    eval_formula,
    formula_atoms,
)
from .errors import (
    IllegalStepError,
    InvalidOutcomeError,
    NonExogenousInContextError,
    NotApplicableError,
    UnknownAtomError,
)

if TYPE_CHECKING:  # pragma: no cover
    from .textio import StoryDocument


class NoEffect:
    """Sentinel outcome for an event that fires without visible effect."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "none"


NO_EFFECT = NoEffect()

#: What a fired event realized: a head atom, or nothing visible.
Outcome = Atom | NoEffect


class LawStatus(enum.Enum):
    """Mutually exclusive status of one law in one state."""

    FIRED = "fired"
    APPLICABLE = "applicable"
    PENDING = "pending"
    IMPOSSIBLE = "impossible"


@dataclass(frozen=True)
class State:
    """A node of an execution tree.

    ``interp`` is the set of true atoms, ``fired`` the labels of laws
    consumed so far, ``over`` the cached overestimate of atoms that can
    still be caused (always a superset of ``interp``).
    """

    interp: frozenset
    fired: frozenset
    over: frozenset


@dataclass(frozen=True)
class Event:
    """One step of a branch: which law fired and what it realized."""

    label: str
    outcome: Outcome

    def __str__(self) -> str:
        return f"{self.label} -> {self.outcome}"


@dataclass(frozen=True)
class Branch:
    """A root-to-node path: successive states plus the events between them."""

    states: tuple[State, ...]
    events: tuple[Event, ...]

    @property
    def final_state(self) -> State:
        return self.states[-1]

    def __len__(self) -> int:
        return len(self.events)


@dataclass(frozen=True)
class TreeEdge:
    outcome: Outcome
    prob: Probability
    child: "TreeNode"


@dataclass(frozen=True)
class TreeNode:
    """An execution-tree node; internal nodes record the law that fired."""

    state: State
    law: CPLaw | None
    edges: tuple[TreeEdge, ...]

    @property
    def is_leaf(self) -> bool:
        return not self.edges


@dataclass(frozen=True)
class ExecutionTree:
    theory: Theory
    root: TreeNode

    def nodes(self) -> Iterator[TreeNode]:
        stack = [self.root]
        while stack:
            node = stack.pop()
            yield node
            stack.extend(edge.child for edge in node.edges)

    def leaves_with_mass(self) -> Iterator[tuple[TreeNode, Probability]]:
        """Leaves paired with the product of edge probabilities to them."""
        stack = [(self.root, Fraction(1))]
        while stack:
            node, mass = stack.pop()
            if node.is_leaf:
                yield node, mass
            else:
                stack.extend((e.child, mass * e.prob) for e in node.edges)


#: Exact probability mass per final interpretation.
Distribution = dict


def overestimate(theory: Theory, interp: AbstractSet[Atom], fired: AbstractSet[str]) -> frozenset:
    """Least fixpoint of the atoms that may still become true.

    An unfired law contributes its head atoms as long as none of its
    negated body atoms is already true (deviations are permanent) and
    its positive body atoms are themselves still causable.
    """
    interp = frozenset(interp)
    over = set(interp)
    candidates = [
        law
        for law in theory.laws
        if law.label not in fired and not (law.negative_body & interp)
    ]
    changed = True
    while changed:
        changed = False
        remaining = []
        for law in candidates:
            if law.positive_body <= over:
                if not law.head_atoms <= over:
                    over.update(law.head_atoms)
                changed = True
            else:
                remaining.append(law)
        candidates = remaining
    return frozenset(over)


def initial_state(theory: Theory, context: AbstractSet[Atom]) -> State:
    """Root state: endogenous atoms false, exogenous atoms as given."""
    context = frozenset(context)
    stray = context - theory.exogenous
    if stray:
        names = ", ".join(sorted(a.name for a in stray))
        raise NonExogenousInContextError(
            f"context may only contain exogenous atoms, got: {names}"
        )
    return State(context, frozenset(), overestimate(theory, context, frozenset()))


def law_status(theory: Theory, state: State, law: CPLaw) -> LawStatus:
    """Classify a law as fired, applicable, pending or impossible.

    Impossible means the body can never hold again: a positive
    precondition left the overestimate, or a negated one became true.
    Applicable requires the positive preconditions to be true now and
    every negated atom to be out of the overestimate for good.
    """
    if law.label in state.fired:
        return LawStatus.FIRED
    if not law.positive_body <= state.over or law.negative_body & state.interp:
        return LawStatus.IMPOSSIBLE
    if law.positive_body <= state.interp and not law.negative_body & state.over:
        return LawStatus.APPLICABLE
    return LawStatus.PENDING


def fire(theory: Theory, state: State, law: CPLaw, outcome) -> State:
    """Fire an applicable law, returning the successor state.

    ``outcome`` is a head atom, or NO_EFFECT when the head leaves
    residual probability. Realizing an atom that is already true leaves
    the interpretation unchanged but still consumes the law.
    """
    status = law_status(theory, state, law)
    if status is not LawStatus.APPLICABLE:
        raise NotApplicableError(
            f"law {law.label} is {status.value}, not applicable"
        )
    if outcome is NO_EFFECT:
        if law.no_effect_prob <= 0:
            raise InvalidOutcomeError(
                f"law {law.label} has no residual probability for a no-effect firing"
            )
        interp = state.interp
    else:
        if not isinstance(outcome, Atom) or outcome not in law.head_atoms:
            raise InvalidOutcomeError(
                f"{outcome} is not a head atom of law {law.label}"
            )
        interp = state.interp | {outcome}
    fired = state.fired | {law.label}
    return State(interp, fired, overestimate(theory, interp, fired))


def applicable_laws(theory: Theory, state: State) -> list[CPLaw]:
    return [
        law
        for law in theory.laws
        if law_status(theory, state, law) is LawStatus.APPLICABLE
    ]


def _policy_rank(theory: Theory, policy: Sequence[str] | None) -> dict:
    if policy is None:
        return {law.label: i for i, law in enumerate(theory.laws)}
    rank: dict = {}
    for i, label in enumerate(policy):
        theory.law(label)  # raises UnknownLabelError for bogus labels
        rank[label] = i
    base = len(rank)
    for i, law in enumerate(theory.laws):
        rank.setdefault(law.label, base + i)
    return rank


def _outcomes(law: CPLaw) -> list:
    out: list = [alt.atom for alt in law.head]
    if law.no_effect_prob > 0:
        out.append(NO_EFFECT)
    return out


def outcome_probability(law: CPLaw, outcome) -> Probability:
    """Probability of one realized outcome of the law's event."""
    if outcome is NO_EFFECT:
        return law.no_effect_prob
    for alt in law.head:
        if alt.atom is outcome:
            return alt.prob
    raise InvalidOutcomeError(f"{outcome} is not an outcome of law {law.label}")


def build_tree(
    theory: Theory,
    context: AbstractSet[Atom] = frozenset(),
    policy: Sequence[str] | None = None,
) -> ExecutionTree:
    """Build one full execution tree under an event-order policy.

    The policy is a label priority order; at each node the applicable
    unfired law with the best rank fires. The default is file order.
    Any fixed policy yields the same final-state distribution, so
    probability queries build a single tree.
    """
    rank = _policy_rank(theory, policy)

    def expand(state: State) -> TreeNode:
        ready = applicable_laws(theory, state)
        if not ready:
            return TreeNode(state, None, ())
        law = min(ready, key=lambda l: rank[l.label])
        edges = []
        for outcome in _outcomes(law):
            child = expand(fire(theory, state, law, outcome))
            edges.append(TreeEdge(outcome, outcome_probability(law, outcome), child))
        return TreeNode(state, law, tuple(edges))

    return ExecutionTree(theory, expand(initial_state(theory, context)))


def enumerate_branches(
    theory: Theory,
    context: AbstractSet[Atom] = frozenset(),
    target: AbstractSet[Atom] | None = None,
) -> Iterator[Branch]:
    """Depth-first stream of all branches over all event orders.

    With a target interpretation, subtrees are pruned as soon as the
    current state made an atom outside the target true, or some missing
    target atom can no longer be caused; exactly the branches whose leaf
    interpretation equals the target are yielded.
    """
    if target is not None:
        target = frozenset(target)
        missing = target - theory.vocabulary
        if missing:
            names = ", ".join(sorted(a.name for a in missing))
            raise UnknownAtomError(f"target mentions unknown atoms: {names}")

    states: list[State] = [initial_state(theory, context)]
    events: list[Event] = []

    def walk() -> Iterator[Branch]:
        state = states[-1]
        if target is not None:
            if not state.interp <= target:
                return
            if not target - state.interp <= state.over:
                return
        ready = applicable_laws(theory, state)
        if not ready:
            if target is None or state.interp == target:
                yield Branch(tuple(states), tuple(events))
            return
        for law in ready:
            for outcome in _outcomes(law):
                states.append(fire(theory, state, law, outcome))
                events.append(Event(law.label, outcome))
                yield from walk()
                states.pop()
                events.pop()

    return walk()


def replay_story(theory: Theory, story: "StoryDocument") -> Branch:
    """Replay a parsed story into a full branch with all intermediate states."""
    state = initial_state(theory, story.context)
    states = [state]
    events = []
    for step in story.steps:
        law = theory.law(step.label)
        status = law_status(theory, state, law)
        if status is not LawStatus.APPLICABLE:
            where = f" (line {step.line})" if step.line else ""
            raise IllegalStepError(
                f"law {step.label} is {status.value} at this point in the story{where}"
            )
        state = fire(theory, state, law, step.outcome)
        states.append(state)
        events.append(Event(step.label, step.outcome))
    return Branch(tuple(states), tuple(events))


def distribution(tree: ExecutionTree) -> Distribution:
    """Aggregate leaf probability mass by final interpretation."""
    dist: Distribution = {}
    for leaf, mass in tree.leaves_with_mass():
        interp = leaf.state.interp
        dist[interp] = dist.get(interp, Fraction(0)) + mass
    return dist


def prob_formula(
    theory: Theory,
    context: AbstractSet[Atom],
    formula: Formula,
    vocabulary: AbstractSet[Atom] | None = None,
) -> Probability:
    """Exact probability of a formula holding in the final state.

    ``vocabulary`` widens the set of known atoms; callers checking a
    transformed theory pass the original theory's vocabulary so that
    atoms whose causing laws were removed stay queryable.
    """
    vocab = theory.vocabulary if vocabulary is None else vocabulary
    missing = formula_atoms(formula) - vocab
    if missing:
        names = ", ".join(sorted(a.name for a in missing))
        raise UnknownAtomError(f"formula mentions unknown atoms: {names}")
    total = Fraction(0)
    for leaf, mass in build_tree(theory, context).leaves_with_mass():
        if eval_formula(formula, leaf.state.interp):
            total += mass
    return total
