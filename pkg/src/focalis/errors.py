"""Exception hierarchy shared by all focalis modules."""


class FocalisError(Exception):
    """Base class for every error raised by focalis."""


# jet arithmetic

class JetError(FocalisError):
    pass


class OrderMismatch(JetError, ValueError):
    pass


class DivisionByZeroJet(JetError, ZeroDivisionError):
    pass


class DomainError(JetError, ValueError):
    pass


class CompositionOffsetError(JetError, ValueError):
    pass


class NotInvertibleJet(JetError, ValueError):
    pass


# curve definitions

class ParseError(FocalisError, ValueError):
    """Malformed curve source.

    ``line`` and ``column`` are 1-based; ``expected`` is the set of token
    descriptions that would have been accepted at that position.
    """

    def __init__(self, message, line=None, column=None, expected=()):
        self.message = message
        self.line = line
        self.column = column
        self.expected = frozenset(expected)
        where = f"line {line}, column {column}: " if line is not None else ""
        tail = ""
        if self.expected:
            tail = " (expected " + ", ".join(sorted(self.expected)) + ")"
        super().__init__(where + message + tail)


class DimensionError(FocalisError, ValueError):
    pass


class PeriodicityError(FocalisError, ValueError):
    pass


class UnknownBuiltin(FocalisError, LookupError):
    pass


# geometry

class GeometryError(FocalisError):
    """A point where the requested geometric quantity does not exist."""


class SingularParametrization(GeometryError):
    pass


class NotGoodCurve(GeometryError):
    pass


class InsufficientOrder(GeometryError, ValueError):
    pass


class FlatteningPoint(GeometryError):
    """The osculating hypersphere degenerates to a hyperplane (centre at infinity)."""


class IllConditionedSystem(GeometryError):
    def __init__(self, message, condition=None):
        self.condition = condition
        super().__init__(message)


class CurvatureZero(GeometryError):
    pass


class VertexPoint(GeometryError):
    """The focal curve is singular here; its Frenet frame is undefined."""


class GridTooCoarse(UserWarning):
    """Two events of the same kind fall within two grid cells of each other."""


class NotSelfCongruent(GeometryError):
    """The Euclidean curvatures are not constant along the sampled curve."""
