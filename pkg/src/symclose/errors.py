"""Exception hierarchy shared by every module."""


class SymcloseError(Exception):
    """Base class for all errors raised by symclose."""


class DimensionMismatch(SymcloseError, ValueError):
    pass


class BadDimension(SymcloseError, ValueError):
    pass


class ZeroDimensional(SymcloseError, ValueError):
    pass


class NotUnit(SymcloseError, ValueError):
    pass


class NotOrthogonal(SymcloseError, ValueError):
    pass


class TrivialStabilizer(SymcloseError, ValueError):
    pass


class IndexOutOfRange(SymcloseError, IndexError):
    pass


class InvalidCap(SymcloseError, ValueError):
    pass


class OutOfRange(SymcloseError, ValueError):
    pass


class PrecisionTooLow(SymcloseError, ValueError):
    pass


class ModeMismatch(SymcloseError, ValueError):
    pass


class AngleSpecMismatch(SymcloseError, ValueError):
    """A declared exact cosine disagrees with the computed principal angles."""


class BadPartition(SymcloseError, ValueError):
    pass


class EmptyGenerators(SymcloseError, ValueError):
    pass


class EmptySet(SymcloseError, ValueError):
    pass


class DegenerateTarget(SymcloseError, ValueError):
    pass


class HypothesisViolated(SymcloseError, ValueError):
    """Raised when an experiment's preconditions do not hold.

    ``clause`` names the failing condition.
    """

    def __init__(self, clause):
        super().__init__(clause)
        self.clause = clause


class ParseError(SymcloseError, ValueError):
    """Malformed configuration input; ``where`` locates the problem."""

    def __init__(self, message, where=None):
        text = message if where is None else f"{where}: {message}"
        super().__init__(text)
        self.where = where
