"""Exception hierarchy shared by all modules."""


class SzegoError(Exception):
    """Base class for domain errors raised by the library."""


class DenominatorRootInsideDisc(SzegoError):
    pass


class NotGeneric(SzegoError):
    """The symbol violates the genericity conditions (simple spectrum,
    nonzero normalization constants, strict interlacing)."""

    def __init__(self, condition: str, detail: str = ""):
        self.condition = condition
        msg = condition if not detail else f"{condition}: {detail}"
        super().__init__(msg)


class NoConvergence(SzegoError):
    pass


class IntervalFailure(SzegoError):
    pass


class InterlacingViolated(SzegoError):
    pass


class SpectralRadiusExceeded(SzegoError):
    pass


class NearPole(SzegoError):
    pass


class StepRejected(SzegoError):
    pass


class NotReal(SzegoError):
    pass


class PoleOutsideDisc(SzegoError):
    pass


class DegenerateFrequencies(SzegoError):
    pass


class ResonantFrequencies(SzegoError):
    pass


class SingularGram(SzegoError):
    pass
