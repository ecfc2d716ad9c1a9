"""Exception types shared across the package.

Every failure mode that callers are expected to branch on gets its own
class.  ``ConsistencyViolation`` is special: it marks a broken internal
cross-check (two independent computations of the same value disagreeing)
and should never be caught and ignored.
"""


class QnAlgError(Exception):
    """Base class for all package errors."""


class NotInvertible(QnAlgError):
    """A scalar had no inverse in its division context."""

    def __init__(self, value=None, message="value is not invertible"):
        super().__init__(message)
        self.value = value


class SubmatrixNotInvertible(QnAlgError):
    """A quasideterminant was undefined because the complementary
    submatrix could not be inverted.  Carries the offending submatrix
    and the (row, column) position that was being evaluated."""

    def __init__(self, row, col, submatrix):
        super().__init__(
            f"quasideterminant at position ({row}, {col}) undefined: "
            "complementary submatrix is not invertible"
        )
        self.row = row
        self.col = col
        self.submatrix = submatrix


class GenericityFailure(QnAlgError):
    """Input scalars are too degenerate for the requested construction
    (an inversion failed or required values coincide)."""

    def __init__(self, message, detail=None):
        super().__init__(message)
        self.detail = detail


class ResourceLimit(QnAlgError):
    """A documented size guard was exceeded (n, degree, or order)."""


class NonTermination(QnAlgError):
    """The rewriting recursion failed its decreasing-measure assertion.
    Raising this means a bug or an input outside the proven domain."""


class ConsistencyViolation(QnAlgError):
    """Two routes that must agree produced different answers."""


class LengthMismatch(QnAlgError):
    """String comparison was asked to order strings of equal degree but
    different lengths; the order is only defined lengthwise."""


class ParseError(QnAlgError):
    """Input text was rejected.  Carries the 0-based offset of the
    offending token and the set of token kinds that were acceptable."""

    def __init__(self, message, position, expected=()):
        super().__init__(f"{message} (at position {position})")
        self.message = message
        self.position = position
        self.expected = tuple(sorted(expected))
