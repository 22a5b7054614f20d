"""Exception and warning types.

Errors derived from :class:`NumericalError` signal that a well-formed request
hit a mathematical obstruction (a branch point, a point of the spectrum, ...).
The command line maps them to exit code 3; plain ``ValueError`` subclasses
are configuration problems and map to exit code 2.
"""


class NumericalError(ArithmeticError):
    """Base class for numerical failures."""


class BranchPointError(NumericalError):
    """Spectral parameter sits on a branch point ``z = +-m`` where ``k(z) = 0``."""


class OnCutError(NumericalError):
    """Spectral parameter lies on the cut of the square root in use."""


class SingularMatrixError(NumericalError):
    """A 2x2 matrix that has to be inverted is (numerically) singular."""


class NotInResolventSetError(NumericalError):
    """The requested spectral parameter is an eigenvalue of the operator."""


class EigenvalueHitError(NotInResolventSetError):
    """Spectral parameter is an eigenvalue of the Schroedinger operator."""


class DegenerateCaseError(NumericalError):
    """Point spectrum is a half-plane or the whole gap, not a finite set."""


class DegenerateConditionError(NumericalError):
    """Eigenvalue condition holds identically in the spectral parameter."""


class ContourOnZeroError(NumericalError):
    """A zero of the analytic function lies on (or too close to) the contour."""


class DivergentIntegralError(NumericalError):
    """Form-factor integral diverges for a non-compact profile and Im w < 0."""


class ResolutionError(NumericalError):
    """Grid too coarse to resolve the approximating profile."""


class NotHermitianError(ValueError):
    """A hermitian coupling matrix was required."""


class NearTransitionWarning(UserWarning):
    """Coupling matrix lies inside the warning band of a spectral transition."""
