"""Exception types shared across the package."""


class FloerqError(Exception):
    """Base class for all package errors."""


class GradingError(FloerqError):
    """Degree bookkeeping is inconsistent (parity undefined, modulus mismatch)."""


class ShapeError(FloerqError):
    """Arity, index range, or basis mismatch."""


class NotAComplexError(FloerqError):
    """The differential does not square to zero."""


class UnknownOrbitError(FloerqError, KeyError):
    """A name does not refer to an orbit of the ambient data."""


class MissingTableError(FloerqError, KeyError):
    """A required count table is absent from the bundle."""


class CompositionError(FloerqError):
    """Table keys do not compose for the requested gluing."""


class GenericityError(FloerqError):
    """Flow-star enumeration hit a degenerate configuration; perturb the amplitudes."""


class HypothesisError(FloerqError):
    """A secondary operation's hypotheses fail; carries a witness."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class DocumentError(FloerqError):
    """A document file cannot be parsed or violates the schema."""
