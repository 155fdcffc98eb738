"""Exceptions raised by validation and precondition checks."""


class CouplingError(ValueError):
    """Base class for every validation failure in this package."""


class NegativeMassError(CouplingError):
    """A mass is more negative than the -1e-12 dust tolerance."""


class NotNormalizedError(CouplingError):
    """Masses do not sum to 1 within 1e-9."""


class EmptyPmfError(CouplingError):
    """A pmf needs at least one mass."""


class BadParameterError(CouplingError):
    """A scalar parameter is outside its legal range."""


class BadProbabilityError(CouplingError):
    """A probability lies outside [0, 1] beyond the 1e-12 tolerance."""


class EmptyCollectionError(CouplingError):
    """An operation over a collection of pmfs received none."""


class SupportTooLargeError(CouplingError):
    """Brute-force enumeration refused; the support exceeds its cap."""


class NotMajorizedError(CouplingError):
    """A required majorization precondition does not hold."""


class NotSortedError(CouplingError):
    """Masses were required in non-increasing order."""


class ZeroRowError(CouplingError):
    """A joint table row sums to zero, so conditioning on it is undefined."""


class ZeroColumnError(CouplingError):
    """A joint table column sums to zero, so conditioning on it is undefined."""


class ParseError(CouplingError):
    """An input file does not match the expected schema."""
