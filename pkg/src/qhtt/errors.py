"""Exception hierarchy shared by all qhtt modules."""


class QhttError(Exception):
    """Base class; ``span`` is an optional source span for diagnostics."""

    def __init__(self, message, span=None):
        super().__init__(message)
        self.message = message
        self.span = span

    def __str__(self):
        if self.span is not None:
            return f"{self.span.line}:{self.span.col}: {self.message}"
        return self.message


class ParseError(QhttError):
    def __init__(self, message, span=None, expected=()):
        super().__init__(message, span)
        self.expected = tuple(sorted(set(expected)))


# linear algebra
class CapacityError(QhttError):
    pass


class TargetError(QhttError):
    pass


class DimError(QhttError):
    pass


class NeedsInstantiation(QhttError):
    pass


# propositions and typing
class QTypeError(QhttError):
    """Ill-typed type, term or proposition."""


class NotSubspaceExpressible(QhttError):
    pass


# symbolic execution
class UseAfterMeasure(QhttError):
    pass


class UnsupportedBranchEffect(QhttError):
    pass


class UnknownBitOrigin(QhttError):
    pass


class AmbiguousGhostBinding(QhttError):
    pass


class FrameSepViolation(QhttError):
    pass


class PreconditionFailure(QhttError):
    pass


class UnderdeterminedPostcondition(QhttError):
    pass


class Unsupported(QhttError):
    pass


# simulator
class SimulationError(QhttError):
    pass


class Divergence(QhttError):
    def __init__(self, message, seed=None, step=None):
        super().__init__(message)
        self.seed = seed
        self.step = step
