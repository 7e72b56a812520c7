"""Exception hierarchy shared by every module in the package.

Three coarse families matter to callers (and to the command line front
end, which maps them to exit codes): parse errors, semantic errors
(well-formed input that contradicts the theory), and query errors
(causation queries whose preconditions do not hold).
"""

from __future__ import annotations


class CPLogicError(Exception):
    """Base class for all errors raised by this package."""


class ParseError(CPLogicError):
    """Malformed concrete syntax, with a best-effort source position."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.line = line
        self.column = column
        if line is not None:
            where = f"line {line}" if column is None else f"line {line}, column {column}"
            message = f"{message} ({where})"
        super().__init__(message)


class SemanticError(CPLogicError):
    """Input parses but is inconsistent with the theory it targets."""


class ValidationError(SemanticError):
    """One or more structural invariants of a theory are violated.

    Carries the full list of problems found in a single pass, not just
    the first one.
    """

    def __init__(self, issues):
        self.issues = tuple(issues)
        super().__init__("; ".join(issue.message for issue in self.issues))


class UnknownAtomError(SemanticError):
    """A formula or query mentions an atom outside the theory's vocabulary."""


class UnknownLabelError(SemanticError):
    """A story step or policy refers to a law label the theory does not define."""


class OutcomeNotInHeadError(SemanticError):
    """A story step's outcome atom is not among the referenced law's head atoms."""


class NoEffectNotAllowedError(SemanticError):
    """A story fires a law with no visible effect although its head sums to 1."""


class NonExogenousInContextError(SemanticError):
    """An initial context tries to make a non-exogenous atom true."""


class NotApplicableError(SemanticError):
    """An attempt to fire a law that is not applicable in the given state."""


class InvalidOutcomeError(SemanticError):
    """An attempt to fire a law with an outcome it cannot produce."""


class IllegalStepError(SemanticError):
    """A story step fires a law that is not applicable at that point."""


class BranchTheoryMismatchError(SemanticError):
    """A branch records events that are inconsistent with the given theory."""


class QueryError(CPLogicError):
    """A causation query whose stated preconditions do not hold."""


class SelfCauseQueryError(QueryError):
    """Cause and effect are the same literal."""


class PreconditionNotInFinalStateError(QueryError):
    """Cause or effect literal does not hold in the branch's final state."""


class EffectNeverHoldsError(QueryError):
    """The effect literal never starts to hold along the branch."""


class ExogenousForcedError(QueryError):
    """An attempt to add a causing law for an exogenous atom."""
