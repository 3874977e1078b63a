"""Exception types shared across the package."""


class OrdflowError(Exception):
    """Base class for all library errors."""


class DivisionByZeroOrdinal(OrdflowError):
    """Left division by the zero ordinal."""


class NotFinite(OrdflowError):
    """Conversion to a natural number requested for an ordinal >= omega."""


class NotSuccessor(OrdflowError):
    """Predecessor requested for zero or a limit ordinal."""


class InvalidCode(OrdflowError):
    """A natural number that is not the code of any ordinal."""


class ParseError(OrdflowError):
    """Rejected input text; carries the offending position."""

    def __init__(self, message, position):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class UnboundVariable(OrdflowError):
    """Evaluation hit a variable missing from the environment."""


class ArityError(OrdflowError):
    """AST node built with the wrong number of arguments."""


class UnknownFunction(OrdflowError):
    """Call to a function name that is not registered."""


class BoundViolation(OrdflowError):
    """A declared bound fails on the checked domain."""


class ClassViolation(OrdflowError):
    """A formula falls outside the class required by an operation."""


class EndpointMismatch(OrdflowError):
    """Flow endpoints that must agree differ at some grid point."""

    def __init__(self, message, counterexample=None):
        super().__init__(message)
        self.counterexample = counterexample


class ShapeViolation(OrdflowError):
    """A formula lacks the syntactic shape an operation requires."""


class NotPolynomial(OrdflowError):
    """A polynomial-length flow was required."""


class FreeVariableViolation(OrdflowError):
    """A formula depends on a variable it must not mention."""


class InvalidProgram(OrdflowError):
    """A local-search program failed validation where validity is required."""


class WitnessSearchFailed(OrdflowError):
    """No candidate witness term satisfies the required condition."""

    def __init__(self, condition, message=""):
        super().__init__(message or f"no witness found for condition {condition!r}")
        self.condition = condition


class HerbrandDisjunctionFails(OrdflowError):
    """The input disjunction is false at some grid point."""

    def __init__(self, point):
        super().__init__(f"disjunction fails at {point!r}")
        self.point = point


class NotDisjoint(OrdflowError):
    """The two sets of a would-be disjoint pair overlap."""

    def __init__(self, witness):
        super().__init__(f"sets overlap at x={witness}")
        self.witness = witness


class NotPolynomialLength(OrdflowError):
    """Compilation requires a length term that is a polynomial in bit-lengths."""


class TooLarge(OrdflowError):
    """A value escapes the range an oracle or conversion supports."""
