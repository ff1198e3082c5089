"""Exception types raised across the package."""

from __future__ import annotations


class AttainableError(Exception):
    """Base class for all errors raised by this package."""


class ParseError(AttainableError, ValueError):
    """Malformed network, field or trajectory input.

    ``location`` names the offending line or field path when known.
    """

    def __init__(self, message: str, location: str | None = None):
        self.location = location
        super().__init__(f"{location}: {message}" if location else message)


class NearDefective(AttainableError):
    """Eigenvector matrix too ill-conditioned for a closed-form solution."""


class IrrationalEigenvalue(AttainableError):
    """An eigenvalue is not within tolerance of a small-denominator rational."""


class ComplexEigenvalue(AttainableError):
    """A monomial factorization was requested for a spectrum with complex pairs."""


class UnstableSpectrum(AttainableError):
    """An eigenvalue has positive real part, so no steady state exists."""


class NonFinite(AttainableError):
    """The vector field produced NaN or infinity during integration."""


class NegativeBlowup(AttainableError):
    """A concentration dropped below the negative tolerance band."""


class DegenerateSubspace(AttainableError):
    """The stoichiometry subspace (or hull) has too small a dimension."""


class OffChart(AttainableError):
    """A query point does not lie on the affine slice of the chart."""


class NumericalFailure(AttainableError):
    """The LP solver did not converge within its iteration budget."""


class WrongDimension(AttainableError):
    """No square face matrix exists for the requested hull dimension."""
