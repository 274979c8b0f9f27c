"""Exception types raised by the toolkit.

Every error derives from :class:`LTIError`, which is also a ``ValueError`` so
callers that only care about bad input can catch the builtin.
"""


class LTIError(ValueError):
    """Base class for all domain errors."""


class ZeroPolynomial(LTIError):
    pass


class NonConjugateRoots(LTIError):
    pass


class DomainMismatch(LTIError):
    pass


class ImproperTF(LTIError):
    pass


class NonStrictlyProper(LTIError):
    pass


class PoleOnGrid(LTIError):
    """A frequency grid point coincides with a pole on the imaginary axis."""


class PoleOnCircleAtGridPoint(PoleOnGrid):
    """A frequency grid point coincides with a pole on the unit circle."""


class NonPositive(LTIError):
    pass


class NonPositiveTau(NonPositive):
    pass


class ZeroLeadingFeedback(LTIError):
    pass


class SequenceTooShort(LTIError):
    pass


class BadRange(LTIError):
    pass


class DegenerateSignal(LTIError):
    """The rule integrates/differentiates the test signal exactly, so no order can be fitted."""


class OriginEvaluation(LTIError):
    pass


class BadBin(LTIError):
    pass


class NyquistViolation(LTIError):
    pass


class ZeroArgument(LTIError):
    pass


class BadPole(LTIError):
    pass


class BadParameter(LTIError):
    pass


class DelayFreeLoop(LTIError):
    pass


class UnsupportedTopology(LTIError):
    pass


class NetlistError(LTIError):
    """Malformed block-graph netlist text."""
