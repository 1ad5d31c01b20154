"""Exception hierarchy.

Input problems derive from :class:`InputError` (also a ``ValueError``);
failures of a numerical procedure on valid input derive from
:class:`NumericalError`.
"""


class FermiBlobError(Exception):
    """Base class for every error raised by the package."""


class InputError(FermiBlobError, ValueError):
    pass


class NumericalError(FermiBlobError, ArithmeticError):
    pass


class NonSymmetricError(InputError):
    pass


class NotPositiveDefiniteError(InputError):
    pass


class OddDimensionError(InputError):
    pass


class LengthMismatchError(InputError):
    pass


class DegeneratePlaneError(InputError):
    pass


class TooSmallError(InputError):
    """The ellipsoid's capacity is below pi*hbar, so no quantum blob fits."""


class GridTooNarrowError(InputError):
    pass


class InsufficientDecayError(InputError):
    pass


class SingularBError(InputError):
    """The upper-right block of a symplectic matrix is (numerically) singular.

    Such matrices are products of two free symplectic matrices, each of which
    has a quadrature representation; that factorization is not implemented.
    """


class AllMaskedError(InputError):
    pass


class NoConvergenceError(NumericalError):
    pass


class PairingFailureError(NumericalError):
    pass


class DegeneracyFailureError(NumericalError):
    pass


class NoContourError(NumericalError):
    pass


class ContainmentError(NumericalError):
    pass
