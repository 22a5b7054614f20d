"""Exact spectral theory of the Dirac operator with a point interaction.

The interaction at ``x = 0`` is encoded by a complex 2x2 coupling matrix
``A = [[alpha, beta], [gamma, delta]]`` through the transmission condition

    (2i sigma_1 - A) psi(0+) = (2i sigma_1 + A) psi(0-).

Eigenvalues off the cut solve ``det(sigma_0 + (i/2) A Z(z)) = 0``.  For
``m != 0`` this is a quadratic in ``zeta(z)``, which is solved in closed form
and mapped back through the explicit inverse of ``zeta``; no iterative root
finding is involved.
"""

from __future__ import annotations

import enum
import warnings
from dataclasses import dataclass
from typing import List, Optional, Tuple

import numpy as np

from .errors import (
    DegenerateCaseError,
    NearTransitionWarning,
    NotHermitianError,
    NotInResolventSetError,
    SingularMatrixError,
)
from .kernel import KernelEvaluator, dirac_free_part, signum
from .spectral_core import (
    SIGMA0,
    SIGMA1,
    SIGMA2,
    SIGMA3,
    Z_of,
    det2,
    inv2,
    k_of,
    kernel_basis,
    zeta_of,
)

#: Absolute tolerance for the equalities that select a spectral regime.
CLASSIFY_TOL = 1e-12
#: Quantities closer than this (but farther than ``CLASSIFY_TOL``) to a
#: transition trigger a :class:`NearTransitionWarning`.
WARNING_BAND = 1e-6


@dataclass(frozen=True)
class CouplingMatrix:
    """Coupling matrix ``[[alpha, beta], [gamma, delta]]``."""

    alpha: complex = 0j
    beta: complex = 0j
    gamma: complex = 0j
    delta: complex = 0j

    def __post_init__(self):
        for name in ("alpha", "beta", "gamma", "delta"):
            value = complex(getattr(self, name))
            if not np.isfinite(value):
                raise ValueError(f"coupling entry {name} is not finite")
            object.__setattr__(self, name, value)

    @classmethod
    def from_matrix(cls, M) -> "CouplingMatrix":
        M = np.asarray(M, dtype=complex)
        if M.shape != (2, 2):
            raise ValueError("coupling matrix must be 2x2")
        return cls(M[0, 0], M[0, 1], M[1, 0], M[1, 1])

    @property
    def matrix(self) -> np.ndarray:
        return np.array([[self.alpha, self.beta], [self.gamma, self.delta]])

    @property
    def det(self) -> complex:
        return self.alpha * self.delta - self.beta * self.gamma

    @property
    def trace(self) -> complex:
        return self.alpha + self.delta

    def adjoint(self) -> "CouplingMatrix":
        return CouplingMatrix.from_matrix(self.matrix.conj().T)

    def __array__(self, dtype=None, copy=None):
        return self.matrix if dtype is None else self.matrix.astype(dtype)


def as_coupling(A) -> CouplingMatrix:
    return A if isinstance(A, CouplingMatrix) else CouplingMatrix.from_matrix(A)


class CaseLabel(str, enum.Enum):
    C1A = "1a"
    C1B = "1b"
    C1C_PLUS = "1c_plus"
    C1C_MINUS = "1c_minus"
    C1D = "1d"
    C2A = "2a"
    C2B = "2b"
    C2C = "2c"
    C2D = "2d"
    C2E = "2e"


class PointSpectrumKind(str, enum.Enum):
    EMPTY = "Empty"
    FINITE_SET = "FiniteSet"
    UPPER_HALF_PLANE = "UpperHalfPlane"
    LOWER_HALF_PLANE = "LowerHalfPlane"
    NON_REAL_PLANE = "NonRealPlane"
    WHOLE_GAP = "WholeGap"


CASE_KIND = {
    CaseLabel.C1A: PointSpectrumKind.NON_REAL_PLANE,
    CaseLabel.C1B: PointSpectrumKind.EMPTY,
    CaseLabel.C1C_PLUS: PointSpectrumKind.UPPER_HALF_PLANE,
    CaseLabel.C1C_MINUS: PointSpectrumKind.LOWER_HALF_PLANE,
    CaseLabel.C1D: PointSpectrumKind.EMPTY,
    CaseLabel.C2A: PointSpectrumKind.WHOLE_GAP,
    CaseLabel.C2B: PointSpectrumKind.EMPTY,
    CaseLabel.C2C: PointSpectrumKind.EMPTY,
    CaseLabel.C2D: PointSpectrumKind.FINITE_SET,
    CaseLabel.C2E: PointSpectrumKind.FINITE_SET,
}


@dataclass(frozen=True)
class EigenvalueRecord:
    """Eigenvalue with its geometric multiplicity.

    ``coefficients`` holds one pair ``(a, a_tilde)`` per eigenvector: the
    amplitudes of the decaying solution on the right and left half-line.
    """

    z: complex
    geometric_multiplicity: int
    coefficients: Tuple[Tuple[complex, complex], ...]
    residual: float = 0.0


@dataclass(frozen=True)
class SpectralClassification:
    case_label: CaseLabel
    point_spectrum_kind: PointSpectrumKind
    eigenvalues: Tuple[EigenvalueRecord, ...] = ()


def _is_zero(value, tol, what):
    mag = abs(value)
    if tol < mag <= WARNING_BAND:
        warnings.warn(
            f"{what} = {mag:.3e} is inside the transition warning band; "
            "the point spectrum is discontinuous here",
            NearTransitionWarning,
            stacklevel=3,
        )
    return mag <= tol


def _case_label(A: CouplingMatrix, m: float, tol: float) -> CaseLabel:
    det_minus_4 = A.det - 4
    if m == 0:
        if _is_zero(A.trace, tol, "|Tr A|"):
            return CaseLabel.C1A if _is_zero(det_minus_4, tol, "|det A - 4|") else CaseLabel.C1B
        if _is_zero(det_minus_4 - 2j * A.trace, tol, "|det A - 4 - 2i Tr A|"):
            return CaseLabel.C1C_PLUS
        if _is_zero(det_minus_4 + 2j * A.trace, tol, "|det A - 4 + 2i Tr A|"):
            return CaseLabel.C1C_MINUS
        return CaseLabel.C1D
    alpha_zero = _is_zero(A.alpha, tol, "|alpha|")
    if not alpha_zero:
        return CaseLabel.C2E
    delta_zero = _is_zero(A.delta, tol, "|delta|")
    det_is_4 = _is_zero(det_minus_4, tol, "|det A - 4|")
    if delta_zero:
        return CaseLabel.C2A if det_is_4 else CaseLabel.C2B
    return CaseLabel.C2C if det_is_4 else CaseLabel.C2D


def classify_spectrum(A, m: float, tol: float = CLASSIFY_TOL) -> SpectralClassification:
    """Regime of the point spectrum and, for finite cases, the eigenvalues."""
    A = as_coupling(A)
    label = _case_label(A, m, tol)
    kind = CASE_KIND[label]
    eigenvalues: Tuple[EigenvalueRecord, ...] = ()
    if kind is PointSpectrumKind.FINITE_SET:
        eigenvalues = tuple(_finite_point_spectrum(A, m))
    return SpectralClassification(label, kind, eigenvalues)


def zeta_inverse(eta: complex, m: float) -> Optional[complex]:
    """Unique ``z`` off the cut with ``zeta(z) = eta``, or ``None``.

    A solution exists iff ``eta`` is non-real and ``Im(eta / (eta^2 - 1))``
    has the sign of ``m``; it is ``m (eta^2 + 1) / (eta^2 - 1)``.
    """
    if m == 0:
        raise ValueError("zeta is not invertible for m = 0")
    eta = complex(eta)
    if eta.imag == 0:
        return None
    e2 = eta * eta
    if np.sign((eta / (e2 - 1)).imag) != np.sign(m):
        return None
    return m * (e2 + 1) / (e2 - 1)


def _quadratic_roots(a, b, c) -> List[complex]:
    """Roots of ``a x^2 + b x + c`` (``a != 0``) without cancellation."""
    s = np.sqrt(complex(b * b - 4 * a * c))
    if (np.conj(b) * s).real < 0:
        s = -s
    q = -0.5 * (b + s)
    if q == 0:
        return [0j, 0j]
    return [q / a, c / q]


def _finite_point_spectrum(A: CouplingMatrix, m: float) -> List[EigenvalueRecord]:
    b = 0.5j * (A.det - 4)
    if abs(A.alpha) <= CLASSIFY_TOL:
        etas = [2j * A.delta / (A.det - 4)]
    else:
        etas = _quadratic_roots(A.alpha, b, A.delta)
    found: List[Tuple[complex, complex]] = []
    for eta in etas:
        z = zeta_inverse(eta, m)
        if z is None:
            continue
        if z.imag == 0 and abs(z.real) >= abs(m):
            # closer to a threshold than the spacing of floats near |m|
            warnings.warn(
                f"an eigenvalue rounds onto the threshold z = {z.real:+g} and is dropped",
                NearTransitionWarning, stacklevel=3,
            )
            continue
        # a numerically double root shows up twice; keep one copy
        if any(abs(z - w) <= 1e-7 * max(1.0, abs(m)) for w, _ in found):
            continue
        found.append((z, eta))
    return [_record(A, m, z, eta) for z, eta in found]


def _record(A: CouplingMatrix, m: float, z: complex, zeta: complex) -> EigenvalueRecord:
    # Z is built from the root zeta itself: near a threshold z = +-m the
    # rounded z no longer determines zeta to full accuracy
    Z = np.diag([zeta, 1 / zeta])
    M = SIGMA0 + 0.5j * A.matrix @ Z
    scale = max(1.0, 0.5 * np.linalg.norm(A.matrix @ Z, 2))
    basis = kernel_basis(M, tol=1e-8, scale=scale)
    if not basis:
        # singular only to the accuracy of the root: keep the weakest direction
        basis = [np.linalg.svd(M)[2][1].conj()]
    coefficients = []
    for tau in basis:
        u = Z @ tau
        a, at = 0.5 * (u[0] + zeta * u[1]), 0.5 * (u[0] - zeta * u[1])
        if abs(a) > 1e-12 * max(abs(a), abs(at)) and a != 0:
            a, at = 1.0 + 0j, at / a
        else:
            a, at = 0j, 1.0 + 0j
        coefficients.append((complex(a), complex(at)))
    return EigenvalueRecord(
        z=complex(z) + 0j,
        geometric_multiplicity=len(basis),
        coefficients=tuple(coefficients),
        residual=float(abs(det2(M))),
    )


def point_spectrum(A, m: float) -> List[EigenvalueRecord]:
    """Eigenvalues (with multiplicities and eigenvector data) of ``D_A``.

    Raises :class:`DegenerateCaseError` when the point spectrum is a
    half-plane or the whole gap.
    """
    cls = classify_spectrum(A, m)
    if cls.point_spectrum_kind in (PointSpectrumKind.EMPTY, PointSpectrumKind.FINITE_SET):
        return list(cls.eigenvalues)
    raise DegenerateCaseError(
        f"case {cls.case_label.value}: point spectrum is {cls.point_spectrum_kind.value}"
    )


def eigenvalue_residual(A, m: float, z) -> complex:
    """``det(sigma_0 + (i/2) A Z(z))``."""
    A = as_coupling(A)
    return complex(det2(SIGMA0 + 0.5j * A.matrix @ Z_of(z, m)))


def eigenvalue_residual_trace_form(A, m: float, z) -> complex:
    """``(4 - det A + 2i Tr(A Z(z))) / 4``; equals :func:`eigenvalue_residual`."""
    A = as_coupling(A)
    return complex((4 - A.det + 2j * np.trace(A.matrix @ Z_of(z, m))) / 4)


def eigenfunction(A, m: float, record: EigenvalueRecord, x, side: int = 1, which: int = 0):
    """Eigenfunction values ``psi(x)``, shape ``x.shape + (2,)``.

    ``side`` picks the one-sided trace at ``x == 0``.
    """
    a, at = record.coefficients[which]
    z = record.z
    k = k_of(z, m)
    zinv = 1 / zeta_of(z, m)
    x = np.asarray(x, dtype=float)
    right = signum(x, side) > 0
    out = np.empty(x.shape + (2,), dtype=complex)
    e_plus = np.exp(1j * k * x)
    e_minus = np.exp(-1j * k * x)
    out[..., 0] = np.where(right, a * e_plus, at * e_minus)
    out[..., 1] = np.where(right, a * zinv * e_plus, -at * zinv * e_minus)
    return out


# --- structural predicates ----------------------------------------------------


@dataclass(frozen=True)
class Decoupling:
    """Result of :func:`decoupling_check`.

    When decoupled, the half-line operators carry the boundary conditions
    ``right_condition @ psi(0+) = 0`` and ``left_condition @ psi(0-) = 0``.
    """

    decoupled: bool
    right_condition: Optional[np.ndarray] = None
    left_condition: Optional[np.ndarray] = None


def decoupling_check(A, tol: float = CLASSIFY_TOL) -> Decoupling:
    A = as_coupling(A)
    M = A.matrix
    decoupled = (
        np.allclose(M, 2j * SIGMA1, rtol=0, atol=tol)
        or np.allclose(M, -2j * SIGMA1, rtol=0, atol=tol)
        or (abs(A.beta + A.gamma) <= tol and abs(A.det + 4) <= tol)
    )
    if not decoupled:
        return Decoupling(False)
    return Decoupling(True, 2j * SIGMA1 - M, 2j * SIGMA1 + M)


def lambda_matrix(A) -> np.ndarray:
    """``(2i sigma_1 - A)^{-1} (2i sigma_1 + A)``: maps psi(0-) to psi(0+)."""
    M = as_coupling(A).matrix
    return inv2(2j * SIGMA1 - M) @ (2j * SIGMA1 + M)


def tilde_lambda(A) -> np.ndarray:
    """``(2i sigma_1 + A)^{-1} (2i sigma_1 - A)``: maps psi(0+) to psi(0-)."""
    M = as_coupling(A).matrix
    return inv2(2j * SIGMA1 + M) @ (2j * SIGMA1 - M)


def adjoint_coupling(A) -> CouplingMatrix:
    """Coupling matrix of the adjoint operator, ``A^*``."""
    return as_coupling(A).adjoint()


def adjoint_transmission_defect(A) -> Optional[float]:
    """How far the adjoint condition is from the transmission condition of ``A^*``.

    Case (i): compares ``Lambda(A^*)`` with ``sigma_1 (Lambda(A)^*)^{-1} sigma_1``;
    case (ii) the analogue for ``tilde_lambda``.  In the decoupled case (iii)
    there is no transfer matrix; the check then verifies that ``A^*`` obeys
    the decoupling conditions too and returns 0 or ``inf``.  Returns ``None``
    only if neither check applies (which does not happen).
    """
    A = as_coupling(A)
    As = A.adjoint()
    try:
        lam = lambda_matrix(A)
        expected = SIGMA1 @ inv2(lam.conj().T) @ SIGMA1
        return float(np.linalg.norm(lambda_matrix(As) - expected))
    except SingularMatrixError:
        pass
    try:
        lt = tilde_lambda(A)
        expected = SIGMA1 @ inv2(lt.conj().T) @ SIGMA1
        return float(np.linalg.norm(tilde_lambda(As) - expected))
    except SingularMatrixError:
        pass
    if decoupling_check(A).decoupled:
        return 0.0 if decoupling_check(As).decoupled else float("inf")
    return None


def is_self_adjoint(A, tol: float = 1e-12) -> bool:
    M = as_coupling(A).matrix
    return bool(np.all(np.abs(M - M.conj().T) <= tol))


def cayley_of(A) -> np.ndarray:
    """Unitary ``U`` (without eigenvalue 1) with ``A = -i (1 - U)^{-1} (1 + U)``."""
    A = as_coupling(A)
    if not is_self_adjoint(A):
        raise NotHermitianError("Cayley transform needs a hermitian coupling matrix")
    M = A.matrix
    return (M + 1j * SIGMA0) @ inv2(M - 1j * SIGMA0)


def cayley_inverse(U) -> np.ndarray:
    U = np.asarray(U, dtype=complex)
    return -1j * inv2(SIGMA0 - U) @ (SIGMA0 + U)


def transmission_residual(A, trace_minus, trace_plus) -> np.ndarray:
    """``(2i sigma_1 - A) psi(0+) - (2i sigma_1 + A) psi(0-)``."""
    M = as_coupling(A).matrix
    pm = np.asarray(trace_minus, dtype=complex)
    pp = np.asarray(trace_plus, dtype=complex)
    return (2j * SIGMA1 - M) @ pp - (2j * SIGMA1 + M) @ pm


def boundary_triplet_residual(A, trace_minus, trace_plus) -> np.ndarray:
    """``Gamma_1 psi + sigma_2 A sigma_2 Gamma_2 psi`` from the one-sided traces.

    Equals ``-(1/2) sigma_2`` times :func:`transmission_residual`.
    """
    M = as_coupling(A).matrix
    pm = np.asarray(trace_minus, dtype=complex)
    pp = np.asarray(trace_plus, dtype=complex)
    gamma1 = SIGMA3 @ (pm - pp)
    gamma2 = 0.5 * SIGMA2 @ (pp + pm)
    return gamma1 + SIGMA2 @ M @ SIGMA2 @ gamma2


# --- resolvents -----------------------------------------------------------------


def free_resolvent_kernel(m: float, z) -> KernelEvaluator:
    """Kernel ``(i/2)(Z(z) + sgn(x-y) sigma_1) exp(i k(z) |x-y|)`` of ``(D_0 - z)^{-1}``."""
    Z = Z_of(z, m)
    k = k_of(z, m)
    return KernelEvaluator(free=(dirac_free_part(Z, k),), params={"m": m, "z": complex(z)})


def interface_factors(m: float, z, scale: float = 1.0):
    """Return ``(left, right)`` with ``left(x) = R_z(x, 0)`` and ``right(y) = R_z(0, y)``."""
    return interface_factors_from(Z_of(z, m), k_of(z, m), scale)


def interface_factors_from(Z, k, scale: float = 1.0):
    """``x -> (i scale/2)(Z + sgn(x) sigma_1) e^{ik|x|}`` and its mirror in ``y``."""
    c = 0.5j * scale

    def left(x, side=1):
        x = np.asarray(x, dtype=float)
        s = signum(x, side)[..., None, None]
        return c * (Z + s * SIGMA1) * np.exp(1j * k * np.abs(x))[..., None, None]

    def right(y, yside=1):
        y = np.asarray(y, dtype=float)
        s = -signum(y, yside)[..., None, None]
        return c * (Z + s * SIGMA1) * np.exp(1j * k * np.abs(y))[..., None, None]

    return left, right


def resolvent_kernel(A, m: float, z, tol: float = 1e-12) -> KernelEvaluator:
    """Kernel of ``(D_A - z)^{-1}``.

    ``R_z(x,y) - R_z(x,0) (sigma_0 + (i/2) A Z)^{-1} A R_z(0,y)``; raises
    :class:`NotInResolventSetError` if ``z`` is an eigenvalue.
    """
    A = as_coupling(A)
    Z = Z_of(z, m)
    M = SIGMA0 + 0.5j * A.matrix @ Z
    scale = max(1.0, np.max(np.abs(M)) ** 2)
    if abs(det2(M)) <= tol * scale:
        raise NotInResolventSetError(f"z = {complex(z)} is an eigenvalue of D_A")
    core = -inv2(M) @ A.matrix
    left, right = interface_factors(m, z)
    free = free_resolvent_kernel(m, z).free
    return KernelEvaluator(
        free=free, left=left, core=core, right=right,
        params={"A": A, "m": m, "z": complex(z)},
    )


def weyl_function(m: float, z) -> np.ndarray:
    """``M(z) = (i/2) sigma_2 Z(z) sigma_2``."""
    return 0.5j * SIGMA2 @ Z_of(z, m) @ SIGMA2


def gamma_field_kernel(m: float, z, x, side: int = 1) -> np.ndarray:
    """``x -> i R_z(x, 0) sigma_2``, shape ``x.shape + (2, 2)``."""
    left, _ = interface_factors(m, z)
    return 1j * left(x, side) @ SIGMA2
