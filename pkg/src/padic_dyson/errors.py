"""Exception types raised across the package."""


class PrimeMismatch(ValueError):
    """Operands live over different primes."""


class DivisionByZero(ZeroDivisionError):
    """Inverting zero, or a value indistinguishable from zero."""


class PrecisionExhausted(ArithmeticError):
    """A valuation needed for a decision could not be certified.

    Retrying at higher precision with the same seed reproduces the same
    random inputs, so callers can escalate safely.
    """


class SingularMatrix(ValueError):
    """Rank deficiency was certified (exact zeros, not precision loss)."""


class SamplerStuck(RuntimeError):
    """A rejection loop hit its retry cap."""


class TruncationTooSmall(RuntimeError):
    """Probability mass leaking out of a truncated state space exceeds tolerance."""


class InsufficientSamples(ValueError):
    """Not enough data for the requested statistic."""
