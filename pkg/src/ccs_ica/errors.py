"""Exception types raised by the library."""


class DomainError(ValueError):
    """Argument outside the mathematical domain of a function."""


class DegenerateContrastError(ArithmeticError):
    """The divergence ratio has a zero denominator or numerator factor."""


class RankDeficiencyError(ArithmeticError):
    """Sample covariance is (numerically) singular."""


class SingularMatrixError(ArithmeticError):
    """Demixing matrix is singular or too badly conditioned to use."""
