class InputError(ValueError):
    """Malformed instance, request or argument."""


class ConfigurationError(ValueError):
    """A required piece of instance data (weights, root, ...) is missing."""


class InfeasibleError(ValueError):
    """Some request cannot be satisfied even by the whole element universe."""


class CapacityError(RuntimeError):
    """An exact (exponential-time) routine was asked to go beyond its cap."""


class InvariantViolation(AssertionError):
    """An engine-internal invariant failed; carries the offending trace."""

    def __init__(self, message, trace=None):
        super().__init__(message)
        self.trace = trace
