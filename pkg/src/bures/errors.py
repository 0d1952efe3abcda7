"""Exception types shared across the package."""


class BuresError(Exception):
    """Base class for all package-specific errors."""


class OutOfDomain(BuresError):
    """A coordinate lies outside its documented range."""


class NonFiniteInput(BuresError):
    """An input coordinate is NaN or infinite."""


class DegenerateSpectrum(BuresError):
    """Eigenvalues too close to each other or to zero for formulas that
    divide by eigenvalue gaps."""


class SingularMetric(BuresError):
    """A metric block is numerically singular (condition number too large)."""


class DegreeMismatch(BuresError):
    """Operation on two forms requires equal degrees."""


class DegreeOverflow(BuresError):
    """Wedge product degree would exceed the dimension of the space."""


class RetryExhausted(BuresError):
    """Too many rejected sample points during Monte-Carlo integration."""
