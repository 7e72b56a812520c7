"""Ground CP-logic: exact probability-tree semantics and actual causation.

The package evaluates causal probabilistic theories into execution
trees with exact rational probabilities, replays stories as branches,
and decides whether one literal actually caused another, both when the
full story is known and when only the final state is.
"""

from .causation import (
    CauseClassification,
    CauseQuery,
    PartialVerdict,
    Verdict,
    actual_cause,
    classify_causes,
    counterfactual_dependency,
    default_candidates,
    effect_index,
    fix_story,
    force,
    prevent,
    relevant_theory,
)
from .core import (
    Atom,
    Conjunction,
    CPLaw,
    Disjunction,
    Formula,
    FormulaAtom,
    HeadAlternative,
    Interpretation,
    Literal,
    Negation,
    Probability,
    Theory,
    ValidationIssue,
    eval_formula,
    literal_formula,
    negation_loop_check,
    validate_theory,
)
from .engine import (
    NO_EFFECT,
    Branch,
    Event,
    ExecutionTree,
    LawStatus,
    State,
    build_tree,
    distribution,
    enumerate_branches,
    fire,
    initial_state,
    law_status,
    overestimate,
    prob_formula,
    replay_story,
)
from .errors import (
    CPLogicError,
    ParseError,
    QueryError,
    SemanticError,
    ValidationError,
)
from .textio import (
    StoryDocument,
    TheoryDocument,
    export_tree_dot,
    load_theory,
    parse_context,
    parse_formula,
    parse_literal,
    parse_story,
    parse_theory,
    serialize_theory,
)

__version__ = "0.1.0"
