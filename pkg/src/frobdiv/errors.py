"""Exception types shared across the package."""


class FrobDivError(Exception):
    """Base class for all errors raised by frobdiv."""


class InvalidArgument(FrobDivError, ValueError):
    pass


class InvalidDiscriminant(InvalidArgument):
    pass


class SingularCurve(FrobDivError):
    pass


class BadReduction(FrobDivError):
    """The curve does not have good reduction at ``p`` (or a coefficient
    denominator is divisible by ``p``)."""

    def __init__(self, p, reason="bad reduction"):
        super().__init__(f"{reason} at p={p}")
        self.p = p
        self.reason = reason


class ExcludedPrime(FrobDivError):
    def __init__(self, p, reason):
        super().__init__(f"p={p} excluded: {reason}")
        self.p = p
        self.reason = reason


class Unsupported(FrobDivError):
    pass


class InconsistentInvariants(FrobDivError):
    pass


class PrecisionFailure(FrobDivError):
    pass


class Degenerate(FrobDivError):
    """A formula hits a zero denominator or an excluded j-invariant."""
