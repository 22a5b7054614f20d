"""Brute-force checks that share no formulas with the analytic modules.

* :func:`fourier_dirac_matrix` discretizes ``D_0 + A (x) |v_eps><v_eps|`` on a
  periodic grid with the spectral (cotangent) derivative, which avoids the
  spurious gap modes of local first-order stencils.
* :func:`schrodinger_fd_matrix` discretizes ``H_A`` with second-order finite
  differences on the two half-lines, eliminating the interface values
  through the transmission condition.
* :func:`resolvent_residual` applies a kernel to a grid function and checks
  the differential equation and the transmission condition directly.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np
from scipy import linalg as sla
from scipy.sparse import linalg as spla

from . import _backend
from .errors import ResolutionError, SingularMatrixError
from .kernel import KernelEvaluator
from .nonrelativistic import h_transmission_residual
from .point_interaction import as_coupling, transmission_residual
from .profiles import profile_from_spec
from .quadrature import composite_gauss
from .spectral_core import SIGMA1, SIGMA3


class OperatorKind(str, enum.Enum):
    FOURIER_DIRAC = "FourierDirac"
    FINITE_DIFF_SCHRODINGER = "FiniteDiffSchrodinger"


@dataclass
class DiscretizedOperator:
    """Dense matrix of a discretized operator and its grid."""

    matrix: np.ndarray
    grid: np.ndarray
    kind: OperatorKind
    h: float
    meta: dict = field(default_factory=dict)

    @property
    def hermitian(self) -> bool:
        return bool(self.meta.get("hermitian", False))

    def eigenvalues(self):
        """All eigenvalues by a dense solve, sorted by real then imaginary part."""
        if self.hermitian:
            ev = sla.eigvalsh(self.matrix).astype(complex)
        else:
            ev = sla.eigvals(self.matrix)
        return ev[np.lexsort((ev.imag, ev.real))]

    def eigenvalues_near(self, sigma, k=4):
        """The ``k`` eigenvalues closest to ``sigma`` (shift-invert, dense LU)."""
        n = self.matrix.shape[0]
        k = min(k, n - 2)
        if self.hermitian and np.imag(sigma) == 0:
            ev = spla.eigsh(self.matrix, k=k, sigma=float(np.real(sigma)),
                            which="LM", return_eigenvectors=False).astype(complex)
        else:
            ev = spla.eigs(self.matrix, k=k, sigma=complex(sigma), which="LM",
                           return_eigenvectors=False)
        return ev[np.argsort(np.abs(ev - sigma))]


def spectral_derivative_matrix(N, L):
    """Periodic first-derivative matrix on ``N`` (even) points of ``[-L, L)``.

    Entries ``(pi/L) (-1)^(j-k) cot(pi (j-k) / N) / 2``; the Nyquist mode is
    differentiated to zero.
    """
    if N % 2:
        raise ValueError("N must be even")
    idx = np.arange(N)
    d = idx[:, None] - idx[None, :]
    with np.errstate(divide="ignore"):
        D = 0.5 * (-1.0) ** d / np.tan(np.pi * d / N)
    D[idx, idx] = 0.0
    return (np.pi / L) * D


def cell_averages(profile, eps, grid, h, order=8):
    """Averages of ``v_eps`` over the cells ``[x_i - h/2, x_i + h/2]``."""
    profile = profile_from_spec(profile)
    lo, hi = eps * profile.lo, eps * profile.hi
    bps = eps * np.asarray(profile.breakpoints, dtype=float)
    out = np.zeros(grid.shape)
    near = np.nonzero((grid + 0.5 * h > lo) & (grid - 0.5 * h < hi))[0]
    for i in near:
        a, b = max(grid[i] - 0.5 * h, lo), min(grid[i] + 0.5 * h, hi)
        if b <= a:
            continue
        edges = np.concatenate([[a], bps[(bps > a) & (bps < b)], [b]])
        s, w = composite_gauss(edges, order)
        out[i] = np.sum(w * profile(s / eps)) / (eps * h)
    return out


def projected_profile(profile, eps, L, N):
    """Nodal values of the truncated Fourier series of ``v_eps`` on ``[-L, L)``.

    Modes ``|n| < N/2`` (the Nyquist mode is dropped, as in the derivative).
    Using these values in the rank-one term is the Galerkin projection of
    ``|v_eps><v_eps|`` onto the trigonometric interpolants, which keeps
    high-order convergence for discontinuous profiles.
    """
    profile = profile_from_spec(profile)
    n = np.arange(-N // 2 + 1, N // 2)
    xi = np.pi * n / L
    s, w = profile.panels(16, 0.125)
    coef = (w * profile(s)) @ np.exp(-1j * np.outer(eps * s, xi))
    x = -L + (2.0 * L / N) * np.arange(N)
    return ((np.exp(1j * np.outer(x, xi)) @ coef) / (2 * L)).real


def default_box_length(m, z_expected):
    """``30 / Im k(z)``: wrap-around of a bound state at ``z`` stays below ``e^-30``."""
    from .spectral_core import k_of

    return 30.0 / k_of(z_expected, m).imag


def fourier_dirac_matrix(A, m, eps, profile, L, N, sampling="spectral") -> DiscretizedOperator:
    """``2N x 2N`` matrix of ``-i sigma_1 d/dx + m sigma_3 + A (x) W_eps`` on ``[-L, L)``.

    The rank-one part is ``h u u^T`` with ``u`` the nodal values of the
    projected profile (``sampling="spectral"``, default) or its cell
    averages (``sampling="cell"``).  Unknowns are ordered component-major.
    """
    A = as_coupling(A)
    N = int(N)
    if N % 2 or N < 4:
        raise ValueError("N must be an even integer >= 4")
    profile = profile_from_spec(profile)
    h = 2.0 * L / N
    if eps < 4 * h:
        raise ResolutionError(f"eps = {eps} is below 4h = {4 * h:.4g}; increase N or decrease L")
    if eps * profile.support_radius >= L:
        raise ValueError("profile support does not fit into the periodic box")
    x = -L + h * np.arange(N)
    D = spectral_derivative_matrix(N, L)
    if sampling == "spectral":
        u = projected_profile(profile, eps, L, N)
    elif sampling == "cell":
        u = cell_averages(profile, eps, x, h)
    else:
        raise ValueError(f"unknown sampling {sampling!r}")
    W = h * np.outer(u, u)
    Am = A.matrix
    M = np.empty((2 * N, 2 * N), dtype=complex)
    eye = np.eye(N)
    M[:N, :N] = m * eye + Am[0, 0] * W
    M[:N, N:] = -1j * D + Am[0, 1] * W
    M[N:, :N] = -1j * D + Am[1, 0] * W
    M[N:, N:] = -m * eye + Am[1, 1] * W
    herm = bool(np.allclose(Am, Am.conj().T, rtol=0, atol=1e-14))
    return DiscretizedOperator(M, x, OperatorKind.FOURIER_DIRAC, h,
                               {"hermitian": herm, "eps": eps, "m": m, "L": L, "N": N})


def free_fourier_eigenvalues(m, L, N):
    """Exact eigenvalues of the free periodic discretization."""
    n = np.arange(-N // 2 + 1, N // 2)
    xi = np.pi * n / L
    e = np.sqrt(xi**2 + m * m)
    ev = np.concatenate([e, -e, [abs(m), -abs(m)]])
    return np.sort(ev)


def fourier_gap_eigenvalues(op: DiscretizedOperator, targets: Sequence[complex], k=4, tol=None):
    """Eigenvalues of ``op`` near each target that lie inside the gap ``|Re z| < |m|``.

    The constant modes sit at ``+-|m|`` up to rounding; a relative margin of
    ``1e-9`` keeps them out.
    """
    m = abs(op.meta["m"]) * (1 - 1e-9)
    found = []
    for t in targets:
        for ev in op.eigenvalues_near(t, k):
            if abs(ev.real) < m and not any(abs(ev - f) < 1e-9 for f in found):
                found.append(complex(ev))
    return found


def schrodinger_fd_matrix(A, m, L, N) -> DiscretizedOperator:
    """Second-order discretization of ``H_A`` on ``[-L, 0) U (0, L]``, Dirichlet at ``+-L``.

    Each half-line carries ``N`` cells of width ``h = L/N``.  The interface
    values ``psi(0+-)`` are eliminated: the one-sided second-order
    derivatives ``psi'(0-) = (3 p_- - 4 u_-1 + u_-2) / 2h`` and
    ``psi'(0+) = (-3 p_+ + 4 u_1 - u_2) / 2h`` are substituted into the
    transmission condition, which is then solved for ``(p_-, p_+)``.
    """
    A = as_coupling(A)
    N = int(N)
    if N < 64:
        raise ValueError("N must be at least 64")
    if not m > 0:
        raise ValueError("m must be positive")
    h = L / N
    n = N - 1  # interior unknowns per half
    # residual = C @ (p-, p+, d-, d+), linear in the four boundary values
    C = np.stack([h_transmission_residual(A, e) for e in np.eye(4)], axis=1)
    # (p-, p+, d-, d+) = Ep @ p + Eu @ (u_-1, u_-2, u_1, u_2)
    Ep = np.array([[1, 0], [0, 1], [1.5 / h, 0], [0, -1.5 / h]], dtype=complex)
    Eu = np.zeros((4, 4), dtype=complex)
    Eu[2, 0], Eu[2, 1] = -2 / h, 0.5 / h
    Eu[3, 2], Eu[3, 3] = 2 / h, -0.5 / h
    CEp = C @ Ep
    if abs(np.linalg.det(CEp)) <= 1e-14 * max(1.0, np.max(np.abs(CEp))) ** 2:
        raise SingularMatrixError("interface values cannot be eliminated for this A")
    S = -np.linalg.solve(CEp, C @ Eu)  # (p-, p+) = S @ (u_-1, u_-2, u_1, u_2)
    size = 2 * n
    H = np.zeros((size, size), dtype=complex)
    c = -1.0 / (2 * m * h * h)
    idx = np.arange(size)
    H[idx, idx] = -2 * c
    for i in range(size - 1):
        if i == n - 1:
            continue  # the two halves only talk through the interface
        H[i, i + 1] = c
        H[i + 1, i] = c
    # left half: index n-1 is u_-1, n-2 is u_-2; right half: n is u_1, n+1 is u_2
    cols = [n - 1, n - 2, n, n + 1]
    H[n - 1, cols] += c * S[0]
    H[n, cols] += c * S[1]
    x = np.concatenate([-L + h * np.arange(1, N), h * np.arange(1, N)])
    herm = bool(np.allclose(H, H.conj().T, rtol=0, atol=1e-12 * abs(c)))
    return DiscretizedOperator(H, x, OperatorKind.FINITE_DIFF_SCHRODINGER, h,
                               {"hermitian": herm, "m": m, "L": L, "N": N})


# --- resolvent residuals ------------------------------------------------------------


@dataclass(frozen=True)
class ResidualReport:
    differential: float
    transmission: float
    nodes_checked: int


def fd_derivative(g, h):
    """Fourth-order central differences along axis 0 (ends left as NaN)."""
    d = np.full(g.shape, np.nan, dtype=complex)
    d[2:-2] = (g[:-4] - 8 * g[1:-3] + 8 * g[3:-1] - g[4:]) / (12 * h)
    return d


def apply_kernel(kernel: KernelEvaluator, x, psi, corrected=True):
    """``g(x_i) = int K(x_i, y) psi(y) dy`` by the trapezoid rule on a uniform grid.

    The free parts use the O(n) exponential recurrence.  Their kink at
    ``y = x_i`` and the kink of the right factor at ``y = 0`` (both grid
    nodes) get the Euler-Maclaurin jump correction, which makes the rule
    fourth-order for smooth ``psi`` vanishing at the ends.  Returns
    ``(g, g_plus0, g_minus0)`` with the one-sided values at ``x = 0``.
    """
    x = np.asarray(x, dtype=float)
    psi = np.asarray(psi, dtype=complex)
    h = x[1] - x[0]
    w = np.full(x.shape, h)
    w[0] = w[-1] = 0.5 * h
    dpsi = np.zeros_like(psi)
    if corrected:
        dpsi = fd_derivative(psi, h)
        dpsi[:2] = dpsi[-2:] = 0.0
    g = np.zeros_like(psi)
    for part in kernel.free:
        left, right = _backend.exp_kernel_apply(x, w, psi, part.kappa)
        diag = w[:, None] * psi
        g += (left + right + diag) @ part.even.T + (left - right) @ part.odd.T
        if corrected:
            jump = 2j * part.kappa * psi @ part.even.T - 2 * dpsi @ part.odd.T
            g += h * h / 12.0 * jump
    i0 = int(np.argmin(np.abs(x)))
    if abs(x[i0]) > 1e-12 * max(1.0, abs(h)):
        raise ValueError("grid must contain x = 0")
    g_plus = g[i0].copy()
    g_minus = g[i0].copy()
    if kernel.core is not None:
        R = kernel.right(x, 0)
        vec = np.einsum("i,iab,ib->a", w, R, psi)
        if corrected:
            # jump of d/dy [right(y) psi(y)] across y = 0
            rp, rm = kernel.right(np.array([h, 2 * h]), 1), kernel.right(np.array([-h, -2 * h]), -1)
            r0p, r0m = kernel.right(np.array(0.0), 1), kernel.right(np.array(0.0), -1)
            dr_p = (-3 * r0p + 4 * rp[0] - rp[1]) / (2 * h)
            dr_m = (3 * r0m - 4 * rm[0] + rm[1]) / (2 * h)
            jump = (dr_p - dr_m) @ psi[i0] + (r0p - r0m) @ dpsi[i0]
            vec = vec + h * h / 12.0 * jump
        coeff = kernel.core @ vec
        g += np.einsum("iab,b->ia", kernel.left(x, 0), coeff)
        g_plus += kernel.left(np.array(0.0), 1) @ coeff
        g_minus += kernel.left(np.array(0.0), -1) @ coeff
    return g, g_plus, g_minus


def resolvent_residual(kernel: KernelEvaluator, A, m, z, psi, x, exclude=(0.0,),
                       exclude_width=None, perturbation=None, corrected=True) -> ResidualReport:
    """Residual of ``g = K psi`` in ``(D - z) g = psi`` and in the transmission condition.

    Nodes within ``exclude_width`` (default ``3h``) of the points in
    ``exclude`` and the two nodes at each end are skipped.  For an
    approximate kernel pass ``perturbation=(eps, profile)``: then the
    residual of ``(D + A (x) W_eps - z) g = psi`` is reported and the
    transmission value is ``nan``.
    """
    A = as_coupling(A)
    x = np.asarray(x, dtype=float)
    psi = np.asarray(psi, dtype=complex)
    h = x[1] - x[0]
    g, gp, gm = apply_kernel(kernel, x, psi, corrected=corrected)
    dg = fd_derivative(g, h)
    lhs = -1j * dg @ SIGMA1.T + m * g @ SIGMA3.T - z * g
    if perturbation is not None:
        eps, profile = perturbation
        vbar = cell_averages(profile, eps, x, h)
        inner = h * (vbar @ g)
        lhs = lhs + np.outer(vbar, A.matrix @ inner)
    res = np.linalg.norm(lhs - psi, axis=1)
    width = 3 * h if exclude_width is None else exclude_width
    keep = np.ones(x.shape, dtype=bool)
    keep[:2] = keep[-2:] = False
    for p in exclude:
        keep &= np.abs(x - p) > width
    diff = float(np.max(res[keep]))
    if perturbation is None:
        tr = float(np.linalg.norm(transmission_residual(A, gm, gp)))
    else:
        tr = float("nan")
    return ResidualReport(diff, tr, int(np.count_nonzero(keep)))


def smooth_test_function(x, center=0.3, width=0.6, phase=0.7):
    """Gaussian-modulated spinor, negligible beyond ``|x - center| > 8 width``."""
    x = np.asarray(x, dtype=float)
    env = np.exp(-0.5 * ((x - center) / width) ** 2)
    return np.stack([env * np.exp(1j * phase * x), (0.5 - 0.4j) * env * np.cos(2 * x)], axis=-1)
