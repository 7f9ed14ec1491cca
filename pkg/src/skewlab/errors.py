"""Exception hierarchy shared by every module."""


class SkewlabError(Exception):
    """Base class for library errors."""


class FieldMismatch(SkewlabError, ValueError):
    pass


class RingMismatch(SkewlabError, ValueError):
    pass


class NotInvertible(SkewlabError, ValueError):
    """A map or element has no inverse in the supported classes."""


class UnsupportedClass(SkewlabError, ValueError):
    """Input lies outside the families the library can handle exactly."""


class UnsupportedIdeal(UnsupportedClass):
    """Ideal shape needs general Groebner machinery."""


class NotStable(SkewlabError, ValueError):
    """An ideal is not stable under the automorphism."""


class PreconditionError(SkewlabError, ValueError):
    pass


class BoundExceeded(SkewlabError, RuntimeError):
    """A bounded search or closure ran out of budget."""


class InvariantViolation(SkewlabError, AssertionError):
    """An internal consistency check failed."""
