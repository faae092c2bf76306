"""Exception hierarchy shared by all modules."""


class JetError(ValueError):
    """Base class for every domain error raised by :mod:`metricjets`."""


class DimensionMismatch(JetError):
    pass


class OrderError(JetError):
    """An operand does not carry enough jet order for the requested result."""


class SingularLinearPart(JetError):
    pass


class FrameError(JetError):
    """The constant term of a metric jet is not (rationally reducible to) the identity."""


class NotNormalForm(JetError):
    """A metric jet fails the Gauss-lemma identities where they are required."""


class NonUnitError(JetError):
    pass


class DocumentError(JetError):
    """A jet document is malformed; the message names the offending key."""
