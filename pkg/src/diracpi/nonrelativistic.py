"""Speed of light, Schroedinger point interactions and the non-relativistic limit.

With the speed of light ``c`` the free Dirac kernel becomes

    R^c_z(x, y) = (i / 2c)(Z_c(z) + sgn(x - y) sigma_1) exp(i k_c(z) |x - y|),

``k_c(z) = sqrt((z - mc^2)(z + mc^2)) / c`` and ``zeta_c = (z + mc^2) / (c k_c)``.
Scaling the coupling as ``A_c = [[alpha / 2mc, beta], [gamma, 2mc delta]]``
makes ``D_{A_c}^{m,c} - mc^2`` converge to the Schroedinger operator
``H_A = -(1/2m) d^2/dx^2`` whose domain is fixed by
``Gamma~_1 psi = V A V^* Gamma~_2 psi``, ``V = diag(i, 1)``.

Near ``z = z0 + mc^2`` the product ``(z - mc^2)(z + mc^2)`` is evaluated as
``z0 (z0 + 2mc^2)`` so that large ``c`` does not cost accuracy.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List

import numpy as np

from . import _backend
from .errors import (
    DegenerateConditionError,
    EigenvalueHitError,
    NotInResolventSetError,
    OnCutError,
    SingularMatrixError,
)
from .kernel import KernelEvaluator, dirac_free_part, signum
from .point_interaction import CouplingMatrix, as_coupling, interface_factors_from
from .spectral_core import SIGMA0, det2, inv2, sqrt_upper

V = np.diag([1j, 1.0 + 0j])
V.setflags(write=False)


@dataclass(frozen=True)
class ScaledCoupling:
    """Base coupling ``A`` together with its ``c``-scaled version ``A_c``."""

    base: CouplingMatrix
    m: float
    c: float

    def __post_init__(self):
        if not (self.m > 0 and self.c > 0):
            raise ValueError("scaling needs m > 0 and c > 0")

    @property
    def scaled(self) -> CouplingMatrix:
        f = 2 * self.m * self.c
        A = self.base
        return CouplingMatrix(A.alpha / f, A.beta, A.gamma, f * A.delta)

    @property
    def matrix(self) -> np.ndarray:
        return self.scaled.matrix


def scale_coupling(A, m, c) -> ScaledCoupling:
    return ScaledCoupling(as_coupling(A), float(m), float(c))


def c_momentum(m, c, z=None, z0=None):
    """``(k_c, zeta_c)`` at ``z``, or at ``z0 + mc^2`` when ``z0`` is given."""
    mc2 = m * c * c
    if z0 is not None:
        z0 = complex(z0)
        prod = z0 * (z0 + 2 * mc2)
        zplus = z0 + 2 * mc2
    else:
        z = complex(z)
        prod = (z - mc2) * (z + mc2)
        zplus = z + mc2
    k = sqrt_upper(prod) / c
    if k == 0:
        raise NotInResolventSetError("spectral parameter at a threshold +-mc^2")
    return k, zplus / (c * k)


def relativistic_kernel_c(A, m, c, z=None, z0=None, tol=1e-12) -> KernelEvaluator:
    """Kernel of ``(D_A^{m,c} - z)^{-1}`` (or at ``z = z0 + mc^2``).

    ``R^c(x,y) - c R^c(x,0) (sigma_0 + (i/2) A Z_c)^{-1} A R^c(0,y)``; ``A``
    is used as given (pass ``scale_coupling(...).scaled`` for the limit).
    """
    A = as_coupling(A)
    if not c > 0:
        raise ValueError("c must be positive")
    k, zeta = c_momentum(m, c, z, z0)
    Z = np.diag([zeta, 1 / zeta])
    M = SIGMA0 + 0.5j * A.matrix @ Z
    if abs(det2(M)) <= tol * max(1.0, np.max(np.abs(M)) ** 2):
        raise NotInResolventSetError("spectral parameter is an eigenvalue of D_A^{m,c}")
    core = -c * inv2(M) @ A.matrix
    left, right = interface_factors_from(Z, k, 1.0 / c)
    zz = complex(z) if z0 is None else complex(z0) + m * c * c
    return KernelEvaluator(
        free=(dirac_free_part(Z, k, 1.0 / c),), left=left, core=core, right=right,
        params={"A": A, "m": m, "c": c, "z": zz},
    )


def mu_of(z, m):
    """``mu(z) = sqrt(2 m z)`` with ``Im mu > 0``."""
    z = complex(z)
    if z.imag == 0 and z.real >= 0:
        raise OnCutError("mu(z) needs z outside [0, +inf)")
    return sqrt_upper(2 * m * z)


def _denominator(A, mu):
    return 4 - A.det + 2j * A.alpha / mu + 2j * mu * A.delta


def K_A_matrix(A, m, z, tol=1e-12):
    """Coefficient matrix of the finite-rank part of ``(H_A - z)^{-1}``."""
    A = as_coupling(A)
    mu = mu_of(z, m)
    den = _denominator(A, mu)
    scale = max(4.0, abs(A.det), abs(A.alpha / mu), abs(mu * A.delta))
    if abs(den) <= tol * scale:
        raise EigenvalueHitError(f"z = {complex(z)} is an eigenvalue of H_A")
    num = np.array([
        [mu * A.det - 2j * A.alpha, 2 * A.beta],
        [-2 * A.gamma, A.det / mu - 2j * A.delta],
    ])
    return 1j * m / den * num


def krein_identity_check(A, m, z):
    """``|| cA (1 - M cA)^{-1} + (2/m) K_A ||_F`` with ``cA = -V A V^*``.

    ``M = (i/2) diag(1/mu, mu)`` is the Weyl function of the Schroedinger
    boundary triplet.
    """
    A = as_coupling(A)
    mu = mu_of(z, m)
    cA = -V @ A.matrix @ V.conj().T
    M = 0.5j * np.diag([1 / mu, mu])
    lhs = cA @ inv2(SIGMA0 - M @ cA)
    return float(np.linalg.norm(lhs + (2.0 / m) * K_A_matrix(A, m, z)))


@dataclass(frozen=True)
class SchrodingerKernel:
    """Kernel of ``(H_A - z)^{-1}``.

    ``(im/mu) e^{i mu |x-y|} - u(x)^T K_A u(y)`` with
    ``u(x) = (f_z(x) / (i mu), g_z(x))``, ``f_z = e^{i mu |x|}``, ``g_z = sgn f_z``.
    """

    A: CouplingMatrix
    m: float
    z: complex
    mu: complex
    K: np.ndarray

    def basis(self, x, side=1):
        """``u(x)``, shape ``x.shape + (2,)``; ``side`` settles ``sgn(0)``."""
        x = np.asarray(x, dtype=float)
        f = np.exp(1j * self.mu * np.abs(x))
        return np.stack([f / (1j * self.mu), signum(x, side) * f], axis=-1)

    def free_part(self, x, y):
        d = np.abs(np.asarray(x, dtype=float) - np.asarray(y, dtype=float))
        return 1j * self.m / self.mu * np.exp(1j * self.mu * d)

    def evaluate(self, x, y, side=1, yside=1):
        ux = self.basis(x, side)
        uy = self.basis(y, yside)
        corr = np.einsum("...a,ab,...b->...", ux, self.K, uy)
        return self.free_part(x, y) - corr

    __call__ = evaluate


def schrodinger_resolvent_kernel(A, m, z) -> SchrodingerKernel:
    A = as_coupling(A)
    return SchrodingerKernel(A, float(m), complex(z), mu_of(z, m), K_A_matrix(A, m, z))


def schrodinger_eigenvalues(A, m, tol=1e-12) -> List[complex]:
    """Eigenvalues of ``H_A`` off ``[0, +inf)``.

    Roots of ``2i delta mu^2 + (4 - det A) mu + 2i alpha = 0`` with
    ``Im mu > 0``, mapped to ``z = mu^2 / 2m``.
    """
    A = as_coupling(A)
    if not m > 0:
        raise ValueError("m must be positive")
    a2, a1, a0 = 2j * A.delta, 4 - A.det, 2j * A.alpha
    if abs(a2) <= tol:
        if abs(a1) <= tol:
            if abs(a0) <= tol:
                raise DegenerateConditionError(
                    "eigenvalue condition holds for every z (alpha = delta = 0, det A = 4)")
            return []
        mus = [-a0 / a1]
    else:
        s = np.sqrt(complex(a1 * a1 - 4 * a2 * a0))
        if (np.conj(a1) * s).real < 0:
            s = -s
        q = -0.5 * (a1 + s)
        mus = [q / a2, a0 / q] if q != 0 else [0j]
    out = []
    for mu in mus:
        if mu.imag <= tol * max(1.0, abs(mu)):
            continue
        z = mu * mu / (2 * m)
        if not any(abs(z - w) <= 1e-10 * max(1.0, abs(z)) for w in out):
            out.append(complex(z) + 0j)
    return out


def h_transmission_residual(A, traces):
    """``Gamma~_1 psi - V A V^* Gamma~_2 psi``.

    ``traces = (psi(0-), psi(0+), psi'(0-), psi'(0+))``.
    """
    A = as_coupling(A)
    pm, pp, dm, dp = (complex(t) for t in traces)
    g1 = np.array([dp - dm, pp - pm])
    g2 = 0.5 * np.array([pp + pm, -dp - dm])
    return g1 - V @ A.matrix @ V.conj().T @ g2


def scalar_transmission_conditions(A, traces):
    """The two scalar jump conditions written out entry by entry."""
    A = as_coupling(A)
    pm, pp, dm, dp = (complex(t) for t in traces)
    avg, davg = 0.5 * (pp + pm), 0.5 * (dp + dm)
    return np.array([
        (dp - dm) - A.alpha * avg + 1j * A.beta * davg,
        (pp - pm) + 1j * A.gamma * avg + A.delta * davg,
    ])


# --- non-relativistic limit -----------------------------------------------------


@dataclass(frozen=True)
class LimitDistance:
    value: float
    tail_bound: float
    L: float
    nodes: int

    def __float__(self):
        return self.value


def nonrel_limit_distance(A, m, c, z, truncation_L=None, grid_N=1601, digits=12):
    """HS distance between ``(D_{A_c}^{m,c} - mc^2 - z)^{-1}`` and ``diag(1,0) (H_A - z)^{-1}``.

    Trapezoid rule on ``[-L, L]^2`` with an odd number of nodes, so that
    ``x = 0`` is a node; coincident points use the averaged sign.  The free
    parts differ by a translation-invariant kernel, so the value refers to
    the truncated square and grows like ``sqrt(L)`` with the box.
    """
    A = as_coupling(A)
    mu = mu_of(z, m)
    k, zeta = c_momentum(m, c, z0=z)
    rate = min(k.imag, mu.imag)
    if truncation_L is None:
        # depends on z only, so that a sweep over c uses one box
        L = digits * np.log(10) / (2 * mu.imag) + 1.0
    else:
        L = float(truncation_L)
    n = int(grid_N) | 1
    x = np.linspace(-L, L, n)
    w = np.full(n, x[1] - x[0])
    w[0] = w[-1] = 0.5 * w[0]

    rel = relativistic_kernel_c(scale_coupling(A, m, c).scaled, m, c, z0=z)
    sch = schrodinger_resolvent_kernel(A, m, z)
    e11 = np.zeros((2, 2), dtype=complex)
    e11[0, 0] = 1.0
    fr = rel.free[0]
    even = np.stack([fr.even, -1j * m / mu * e11])
    odd = np.stack([fr.odd, np.zeros((2, 2), dtype=complex)])
    kappa = np.array([fr.kappa, mu])

    u = sch.basis(x, 0)
    P = np.zeros((n, 2, 4), dtype=complex)
    P[:, :, :2] = rel.left(x, 0)
    P[:, 0, 2:] = u
    Q = np.zeros((n, 4, 2), dtype=complex)
    Q[:, :2, :] = rel.core @ rel.right(x, 0)
    Q[:, 2:, 0] = u @ sch.K.T
    sq = _backend.hs_sum(x, w, even, odd, kappa, P, Q)
    # The translation-invariant part is not Hilbert-Schmidt on the whole
    # plane, so the square is part of the definition.  The tail bound covers
    # the finite-rank part only, through its exponential envelope.
    pn = np.sum(np.abs(P) ** 2, axis=(1, 2))
    qn = np.sum(np.abs(Q) ** 2, axis=(1, 2))
    tail_p = (pn[0] + pn[-1]) / (2 * rate)
    tail_q = (qn[0] + qn[-1]) / (2 * rate)
    tail = np.sqrt(tail_p * np.sum(w * qn) + np.sum(w * pn) * tail_q)
    return LimitDistance(float(np.sqrt(max(sq, 0.0))), float(tail), L, n)
