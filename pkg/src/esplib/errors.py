"""Exception hierarchy shared by every module."""


class EspError(Exception):
    pass


class RingMismatch(EspError, TypeError):
    pass


class DimensionMismatch(EspError, ValueError):
    pass


class UnsupportedMembership(EspError):
    """Ideal membership is not decidable for this ring/ideal combination."""


class SizeLimitExceeded(EspError, ValueError):
    pass


class MalformedWord(EspError, ValueError):
    pass


class CapExceeded(EspError):
    pass


class NotUnimodular(EspError, ValueError):
    pass


class SearchExhausted(EspError):
    pass


class CongruenceError(EspError, ValueError):
    """Input is not congruent to the identity (or e1) modulo the ideal."""


class NotSymplectic(EspError, ValueError):
    pass


class FirstRowNotE1(EspError, ValueError):
    pass


class WitnessInvalid(EspError, ValueError):
    pass


class NotInKernel(EspError, ValueError):
    pass


class OrthogonalityViolated(EspError, ValueError):
    pass


class InternalAssertion(EspError, AssertionError):
    """A property that the construction guarantees did not hold: always a bug."""


class DetCheckFailed(InternalAssertion):
    pass


class NoSolution(InternalAssertion):
    pass
