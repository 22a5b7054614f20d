"""Branch-cut aware spectral functions and 2x2 complex linear algebra.

Every routine accepts Python scalars or numpy arrays (broadcasting), except
the matrix helpers which work on single ``(2, 2)`` arrays.

Conventions
-----------
The square root :func:`sqrt_upper` takes the root with positive imaginary
part off ``[0, +inf)`` and the non-negative real root on it.  With this,

    k(z)    = sqrt_upper(z**2 - m**2)
    zeta(z) = (z + m) / k(z)
    Z(z)    = diag(zeta(z), 1 / zeta(z))

are analytic on the complement of ``(-inf, -|m|] U [|m|, +inf)``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import BranchPointError, SingularMatrixError

SIGMA0 = np.eye(2, dtype=complex)
SIGMA1 = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA2 = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA3 = np.array([[1, 0], [0, -1]], dtype=complex)

for _s in (SIGMA0, SIGMA1, SIGMA2, SIGMA3):
    _s.setflags(write=False)


@dataclass(frozen=True)
class ModelParams:
    """Mass and speed of light of the Dirac model."""

    m: float
    c: float = 1.0

    def __post_init__(self):
        if not np.isfinite(self.m):
            raise ValueError("mass must be finite")
        if not (np.isfinite(self.c) and self.c > 0):
            raise ValueError("speed of light must be positive")


def _scalar_or_array(out, like):
    return out if np.ndim(like) else complex(out)


def sqrt_upper(w):
    """Square root with ``Im > 0`` off ``[0, +inf)`` and ``>= 0`` on it."""
    w = np.asarray(w, dtype=complex)
    s = np.sqrt(w)
    s = np.where(s.imag < 0, -s, s)
    return _scalar_or_array(s, w)


def k_of(z, m):
    """Momentum ``k(z) = sqrt_upper(z^2 - m^2)``.

    Evaluated as ``(z - m)(z + m)`` so that ``z`` close to ``+-m`` keeps its
    relative accuracy.
    """
    z = np.asarray(z, dtype=complex)
    return _scalar_or_array(sqrt_upper((z - m) * (z + m)), z)


def _check_branch(z, m):
    if np.any((z == m) | (z == -m)):
        raise BranchPointError(f"k(z) vanishes at z = +-m (m = {m})")


def zeta_of(z, m):
    """``zeta(z) = (z + m) / k(z)``; for ``m = 0`` it is ``sgn(Im z)``.

    On the real axis with ``m = 0`` the defining quotient is used instead,
    which gives ``+-1`` according to the branch of :func:`sqrt_upper`.
    """
    z = np.asarray(z, dtype=complex)
    _check_branch(z, m)
    if m == 0:
        quotient = z / np.where(z == 0, 1, k_of(z, 0))
        out = np.where(z.imag != 0, np.sign(z.imag), quotient)
    else:
        out = (z + m) / k_of(z, m)
    return _scalar_or_array(out, z)


def dzeta_dz(z, m):
    """Derivative of :func:`zeta_of`, ``-m (z + m) / k(z)^3``."""
    z = np.asarray(z, dtype=complex)
    _check_branch(z, m)
    out = -m * (z + m) / k_of(z, m) ** 3
    return _scalar_or_array(out, z)


def Z_of(z, m):
    """Diagonal matrix ``diag(zeta, 1/zeta)``; shape ``(..., 2, 2)``."""
    zeta = np.asarray(zeta_of(z, m))
    out = np.zeros(zeta.shape + (2, 2), dtype=complex)
    out[..., 0, 0] = zeta
    out[..., 1, 1] = 1 / zeta
    return out


def det2(M):
    M = np.asarray(M, dtype=complex)
    return M[..., 0, 0] * M[..., 1, 1] - M[..., 0, 1] * M[..., 1, 0]


def inv2(M, tol=1e-13):
    """Closed-form 2x2 inverse.

    Raises :class:`SingularMatrixError` when ``|det M|`` is below ``tol``
    times the squared largest entry.
    """
    M = np.asarray(M, dtype=complex)
    d = det2(M)
    scale = max(np.max(np.abs(M)) ** 2, np.finfo(float).tiny)
    if abs(d) <= tol * scale:
        raise SingularMatrixError(f"matrix is singular (|det| = {abs(d):.3e})")
    adj = np.array([[M[1, 1], -M[0, 1]], [-M[1, 0], M[0, 0]]])
    return adj / d


def kernel_basis(M, tol=1e-10, scale=0.0):
    """Orthonormal basis of the numerical null space of a 2x2 matrix.

    A direction belongs to the null space when its singular value is at most
    ``tol * max(s_max, scale)``.  Pass ``scale`` when ``M`` is a difference of
    terms of known size, so that a matrix which cancels to roundoff is seen
    as zero (an exactly zero matrix always has a 2-dim kernel).
    """
    M = np.asarray(M, dtype=complex)
    _, s, vh = np.linalg.svd(M)
    ref = max(s[0], scale)
    if ref == 0:
        return [SIGMA0[:, 0].copy(), SIGMA0[:, 1].copy()]
    return [vh[i].conj() for i in range(2) if s[i] <= tol * ref]
