"""Exception hierarchy shared by all resummation modules."""

from __future__ import annotations


class ResummationError(Exception):
    """Base class for every error raised by this package."""


class PoleError(ResummationError, ValueError):
    """Gamma function evaluated at a nonpositive integer."""


class NonConvergence(ResummationError):
    """An iterative kernel stopped before reaching its tolerance."""

    def __init__(self, message: str, residual=None):
        super().__init__(message)
        self.residual = residual


class SingularSystem(ResummationError):
    """A structured linear system has effective rank below its size."""

    def __init__(self, message: str, rank: int, condition=None):
        super().__init__(message)
        self.rank = rank
        self.condition = condition


class QuadratureError(ResummationError):
    pass


class DivergenceError(QuadratureError):
    """Tail of a half-line integral does not decay."""


class SingularityError(QuadratureError):
    """Integrand is not finite somewhere on the half-line."""


class SeriesDomainError(ResummationError, ValueError):
    """Series operation undefined for the given leading coefficient."""


class SingularHankel(SingularSystem):
    """Moment Hankel matrix is rank deficient and cannot be reduced consistently."""


class NonRealResult(ResummationError):
    """Factor set cannot be paired into a real-valued approximant."""


class AccuracyLoss(ResummationError):
    """Re-expanded approximant misses the input coefficients."""

    def __init__(self, message: str, residual=None):
        super().__init__(message)
        self.residual = residual


class DomainError(ResummationError, ValueError):
    """Approximant evaluated past a branch point or pole of one of its factors."""

    def __init__(self, message: str, factor_index: int | None = None, boundary=None):
        super().__init__(message)
        self.factor_index = factor_index
        self.boundary = boundary


class NonSummableDirection(ResummationError):
    """A Borel-transform factor vanishes on the integration ray."""

    def __init__(self, message: str, t_star=None):
        super().__init__(message)
        self.t_star = t_star


class NoAdmissibleU(ResummationError):
    """Every point of a control-parameter grid failed."""


class PrecisionLoss(ResummationError):
    """Requested oracle order exceeds its precision guard."""


class JobValidationError(ResummationError, ValueError):
    """Malformed job description; ``where`` points at the offending line or field."""

    def __init__(self, message: str, where: str | None = None):
        super().__init__(f"{where}: {message}" if where else message)
        self.where = where
