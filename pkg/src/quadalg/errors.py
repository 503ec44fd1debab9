"""Exception types shared across the package."""


class QuadalgError(Exception):
    """Base class for package errors."""


class DegenerateDenominator(QuadalgError):
    """rho(N) denominator vanishes for an in-range N; the offset u is invalid for this p."""


class NegativePhi(QuadalgError):
    """A structure-function value inside the representation window is negative."""


class NoRepresentation(QuadalgError):
    """No (u, E) pair with a positive window exists for the requested dimension."""

    def __init__(self, p: int, message: str = ""):
        self.p = p
        super().__init__(message or f"no representation found for p={p}")


class NonConvergence(QuadalgError):
    """Root search failed to converge from every seed."""


class ImaginaryM(QuadalgError):
    """Radicand of an m-parameter is negative (unphysical channel)."""


class SignError(QuadalgError):
    """Parameter map applied to inputs with the wrong sign (no bound-state dual)."""


class FiberChartSingular(QuadalgError):
    """Fiber angles are undefined at this point (chart preconditions violated)."""


class SingularPoint(QuadalgError):
    """A divisor jet has zero constant term; resample the evaluation point."""


class PochhammerZero(QuadalgError):
    """A Pochhammer denominator term vanishes before the series terminates."""


class GridTooCoarse(QuadalgError):
    """Eigenvalue error estimate stays above target at the largest allowed grid."""


class NoRoot(QuadalgError):
    """Bisection bracket contains no sign change."""

    def __init__(self, lo: float, hi: float, message: str = ""):
        self.lo = lo
        self.hi = hi
        super().__init__(message or f"no sign change in [{lo}, {hi}]")


class ConfigError(QuadalgError):
    """Invalid CLI configuration; carries the offending field name."""

    def __init__(self, field: str, message: str = ""):
        self.field = field
        super().__init__(message or f"invalid configuration field: {field}")
