"""Exception types shared across the package."""


class KindMismatchError(TypeError):
    """Rational and float coordinates were combined in one operation."""


class SocietyFormatError(ValueError):
    """A society file or mapping is malformed."""


class ParameterError(ValueError):
    """Parameters are well formed but describe an infeasible instance (e.g. h >= n)."""


class InvariantViolation(RuntimeError):
    """An internal invariant that the theory guarantees did not hold."""
