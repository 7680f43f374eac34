"""Exception hierarchy.

Every failure the library signals on purpose derives from
:class:`CanonFormError`, so callers (and the command-line front end) can
tell a numerical verdict apart from a programming error.
"""


class CanonFormError(Exception):
    """Base class for all library errors."""


class DimensionMismatch(CanonFormError, ValueError):
    """Matrix shapes are not conformable with each other or the scalar product."""


class ParityError(DimensionMismatch):
    """An even dimension was required (J, U, symplectic side)."""


class NonConvergence(CanonFormError, ArithmeticError):
    """The shifted QR iteration did not converge within ``max_iter`` sweeps."""

    def __init__(self, max_iter, message=None):
        self.max_iter = max_iter
        super().__init__(message or f"QR iteration did not converge in {max_iter} iterations")


class Defective(CanonFormError):
    """A matrix that must be diagonalizable is not (numerically)."""


class NotCommuting(CanonFormError):
    """Two matrices that must commute do not."""


class NotPerHermitian(CanonFormError):
    """A matrix that must be per-Hermitian (R-selfadjoint) is not."""


class NotHermitian(CanonFormError):
    """Input to an inertia computation is not (skew-)Hermitian."""


class Singular(CanonFormError, ArithmeticError):
    """A matrix that must be nonsingular is (numerically) singular."""


class NotNormal(CanonFormError):
    """Input is not normal with respect to the scalar product in force."""


class ConjugatePairMismatch(CanonFormError):
    """Multiplicities of a nonreal eigenvalue and its conjugate disagree."""


class NonRealSpectrum(CanonFormError):
    """A matrix that must have a real spectrum has nonreal eigenvalues."""


class AlphaSearchFailed(CanonFormError):
    """No admissible coefficients were found for the commuting witness."""


class SearchExhausted(CanonFormError):
    """No perturbation coefficient separated the eigenvalues."""


class SizeCapExceeded(CanonFormError):
    """The dense resultant route was asked for a matrix larger than its cap."""


class InvalidSpectrumPairing(CanonFormError, ValueError):
    """A requested spectrum violates the eigenvalue pairing of the class."""


class ParseError(CanonFormError, ValueError):
    """Malformed Matrix Market input."""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class UnsupportedFormat(ParseError):
    """Valid Matrix Market, but not the dense array flavour we read."""
