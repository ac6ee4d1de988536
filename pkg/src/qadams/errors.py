"""Exception types raised across the package."""


class QAError(Exception):
    """Base class for all package errors."""


class CompositeNonzero(QAError):
    pass


class WindowInsufficient(QAError):
    def __init__(self, message, certified=None):
        super().__init__(message)
        self.certified = certified


class UnknownNode(QAError):
    pass


class NotMultiplicative(QAError):
    pass


class PresetError(QAError):
    """Composition table fails associativity, unitality or the ideal check."""


class RepresentationError(QAError):
    """Structure maps violate functoriality or the declared relations."""


class ExactnessFailure(QAError):
    def __init__(self, message, degree=None):
        super().__init__(message)
        self.degree = degree


class EvennessViolated(QAError):
    pass


class CostGuard(QAError):
    pass


class ResourceBudgetExceeded(QAError):
    def __init__(self, message, certified=None):
        super().__init__(message)
        self.certified = certified


class UnsupportedPrime(QAError):
    pass


class WindowMismatch(QAError):
    pass


class NonCommutingInput(QAError):
    pass


class AdamsEdgeViolated(QAError):
    pass


class UnexpectedHigherExtP(QAError):
    pass


class DoubleHit(QAError):
    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class Orphan(QAError):
    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class ParityViolation(QAError):
    def __init__(self, message, cell=None):
        super().__init__(message)
        self.cell = cell
