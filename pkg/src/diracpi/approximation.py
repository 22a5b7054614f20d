"""Regular non-local approximations ``D_0 + A (x) |v_eps><v_eps|``.

Here ``v_eps(x) = v(x / eps) / eps`` for a profile ``v`` with unit integral.
The operator depends on the profile only through the form factor

    alpha_1(w) = int int v(x) v(y) exp(i w |x - y|) dx dy
               = 2 int_0^{2S} rho(t) exp(i w t) dt,

with ``rho`` the autocorrelation of ``v``.  The sign-weighted companion
integral vanishes identically, so the approximate eigenvalue condition is
``det(sigma_0 + (i/2) alpha_1(eps k(z)) A Z(z)) = 0``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, Optional, Tuple

import numpy as np

from . import _backend
from .errors import (
    ContourOnZeroError,
    DivergentIntegralError,
    NotInResolventSetError,
    SingularMatrixError,
)
from .kernel import KernelEvaluator
from .point_interaction import as_coupling, interface_factors, resolvent_kernel
from .profiles import Profile, profile_from_spec
from .quadrature import adaptive_gauss, composite_gauss, gauss_legendre, refine_breaks
from .rootfind import find_zeros
from .spectral_core import SIGMA0, SIGMA1, Z_of, det2, dzeta_dz, inv2, k_of, zeta_of

# --- form factor -----------------------------------------------------------------


def alpha1(profile, w, derivative=False, tol=1e-14):
    """Form factor ``alpha_1(w)``; vectorized over ``w``.

    With ``derivative=True`` returns ``(alpha_1(w), alpha_1'(w))``.
    """
    profile = profile_from_spec(profile)
    w = np.asarray(w, dtype=complex)
    flat = w.reshape(-1)
    if not profile.compact and np.any(flat.imag < 0):
        raise DivergentIntegralError("alpha_1 diverges for Im w < 0 on a non-compact profile")

    def integrand(t):
        rho = profile.rho(t)[:, None]
        phase = np.exp(1j * t[:, None] * flat[None, :])
        vals = rho * phase
        if derivative:
            return np.concatenate([vals, 1j * t[:, None] * vals], axis=1)
        return vals

    total, _ = adaptive_gauss(
        integrand, 0.0, profile.rho_support, tol=tol, order=20,
        breaks=profile.rho_breakpoints,
    )
    total = 2 * np.asarray(total)
    n = flat.size
    value = total[:n].reshape(w.shape)
    if w.ndim == 0:
        value = complex(value)
    if not derivative:
        return value
    deriv = total[n:].reshape(w.shape)
    return value, (complex(deriv) if w.ndim == 0 else deriv)


def triangle_integrals(profile, g, orders=(24, 31), max_len=0.125):
    """Integrals of ``v(x) v(y) g(x, y)`` over the two triangles ``x > y`` and ``x < y``.

    Each triangle gets its own Gauss-Legendre order (``orders``), so a
    cancellation between the two results is not an artefact of a shared
    symmetric node set.
    """
    profile = profile_from_spec(profile)
    lo, hi = profile.lo, profile.hi
    bps = np.asarray(profile.breakpoints, dtype=float)

    def fine(a, b):
        inner = bps[(bps > a) & (bps < b)]
        edges = np.concatenate([[a], inner, [b]])
        n = max(1, int(np.ceil((b - a) / max_len)))
        return refine_breaks(edges, max(n, len(edges) - 1), max_len)

    results = []
    for which, order in zip((1, -1), orders):
        xs, wx = composite_gauss(fine(lo, hi), order)
        acc = 0j
        for xi, wi in zip(xs, wx):
            a, b = (lo, xi) if which == 1 else (xi, hi)
            if b <= a:
                continue
            ys, wy = composite_gauss(fine(a, b), order)
            acc += wi * profile(xi) * np.sum(wy * profile(ys) * g(xi, ys))
        results.append(acc)
    return results[0], results[1]


def alpha1_double_integral(profile, w, orders=(24, 31)):
    """``alpha_1(w)`` straight from the double integral (independent check)."""
    w = complex(w)
    low, up = triangle_integrals(profile, lambda x, y: np.exp(1j * w * np.abs(x - y)), orders)
    return complex(low + up)


def beta_epsilon_check(profile, w, orders=(24, 31)):
    """Sign-weighted double integral ``int int v v sgn(x-y) exp(i w |x-y|)``.

    The integrand is antisymmetric under ``x <-> y``; the two triangles are
    integrated with different rules and the difference is returned.
    """
    w = complex(w)
    low, up = triangle_integrals(profile, lambda x, y: np.exp(1j * w * np.abs(x - y)), orders)
    return complex(low - up)


# --- matrices and kernels -----------------------------------------------------------


def approx_matrix(A, m, z, eps, profile):
    """``sigma_0 + (i/2) alpha_1(eps k(z)) A Z(z)``."""
    A = as_coupling(A)
    a1 = alpha1(profile, eps * k_of(z, m))
    return SIGMA0 + 0.5j * a1 * A.matrix @ Z_of(z, m)


def eta_epsilon(A, m, z, eps, profile, derivative=False):
    """``det`` of :func:`approx_matrix`; vectorized over ``z``.

    Uses ``det(sigma_0 + c A Z) = 1 + c (alpha zeta + delta / zeta) + c^2 det A``.
    """
    A = as_coupling(A)
    z = np.asarray(z, dtype=complex)
    k = k_of(z, m)
    zeta = zeta_of(z, m)
    res = alpha1(profile, eps * np.asarray(k), derivative=derivative)
    a1, da1 = res if derivative else (res, None)
    c = 0.5j * np.asarray(a1)
    lin = A.alpha * zeta + A.delta / zeta
    eta = 1 + c * lin + c * c * A.det
    if not derivative:
        return eta if z.ndim else complex(eta)
    dc = 0.5j * np.asarray(da1) * eps * z / k
    dlin = (A.alpha - A.delta / zeta**2) * dzeta_dz(z, m)
    deta = dc * lin + c * dlin + 2 * c * dc * A.det
    if z.ndim:
        return eta, deta
    return complex(eta), complex(deta)


def profile_transform(profile, x, k, eps, order=16, max_len=0.25):
    """``a(x) = int v(s) e^{ik|x - eps s|} ds`` and the sign-weighted ``b(x)``.

    Outside the scaled support the integrals factor through the Fourier
    transform of ``v``; inside, the ``s`` integral is split at ``x / eps``.
    """
    profile = profile_from_spec(profile)
    x0 = np.asarray(x, dtype=float)
    x = np.atleast_1d(x0)
    k = complex(k)
    ns, ws = profile.panels(order, max_len)
    vs = profile(ns)
    f_plus = np.sum(ws * vs * np.exp(-1j * k * eps * ns))
    f_minus = np.sum(ws * vs * np.exp(1j * k * eps * ns))
    a = np.empty(x.shape, dtype=complex)
    b = np.empty(x.shape, dtype=complex)
    right = x >= eps * profile.hi
    left = x <= eps * profile.lo
    a[right] = np.exp(1j * k * x[right]) * f_plus
    b[right] = a[right]
    a[left] = np.exp(-1j * k * x[left]) * f_minus
    b[left] = -a[left]
    bps = np.asarray(profile.breakpoints, dtype=float)
    for idx in zip(*np.nonzero(~(right | left))):
        xi = x[idx]
        s_star = xi / eps
        edges = np.unique(np.concatenate([bps, [s_star]]))
        n = int(np.ceil((edges[-1] - edges[0]) / max_len))
        edges = refine_breaks(edges, max(n, len(edges) - 1), max_len)
        s, wt = composite_gauss(edges, order)
        d = xi - eps * s
        vals = wt * profile(s) * np.exp(1j * k * np.abs(d))
        below = s < s_star
        a[idx] = np.sum(vals)
        b[idx] = np.sum(vals[below]) - np.sum(vals[~below])
    return a.reshape(x0.shape), b.reshape(x0.shape)


def _approx_factors(m, z, eps, profile):
    Z = Z_of(z, m)
    k = k_of(z, m)

    def left(x, side=1):
        a, b = profile_transform(profile, x, k, eps)
        return 0.5j * (Z * a[..., None, None] + SIGMA1 * b[..., None, None])

    def right(y, yside=1):
        a, b = profile_transform(profile, y, k, eps)
        return 0.5j * (Z * a[..., None, None] - SIGMA1 * b[..., None, None])

    return left, right


def _t_eps(A, m, z, eps, profile, tol=1e-12):
    M = approx_matrix(A, m, z, eps, profile)
    try:
        return inv2(M, tol)
    except SingularMatrixError as exc:
        raise NotInResolventSetError(
            f"z = {complex(z)} is an eigenvalue of the approximating operator"
        ) from exc


def approx_resolvent_kernel(A, m, z, eps, profile):
    """Kernel of ``(D_0 + A (x) W_eps - z)^{-1}``.

    ``R_z(x,y) - H(x) T_eps(z) A H~(y)`` where ``H(x) = int R_z(x, eps s) v(s) ds``
    and ``H~(y) = int v(t) R_z(eps t, y) dt``.
    """
    A = as_coupling(A)
    profile = profile_from_spec(profile)
    T = _t_eps(A, m, z, eps, profile)
    left, right = _approx_factors(m, z, eps, profile)
    free = resolvent_kernel(np.zeros((2, 2)), m, z).free
    return KernelEvaluator(
        free=free, left=left, core=-T @ A.matrix, right=right,
        params={"A": A, "m": m, "z": complex(z), "eps": eps, "profile": profile},
    )


# --- Hilbert-Schmidt distance ---------------------------------------------------------


@dataclass(frozen=True)
class HSDistance:
    """HS norm of the kernel difference on ``[-L, L]^2`` plus a tail bound."""

    value: float
    tail_bound: float
    L: float
    nodes: int

    def __float__(self):
        return self.value


def default_truncation(m, z, extent=0.0, digits=12):
    """``L`` with ``exp(-2 Im k(z) (L - extent)) < 10^-digits``."""
    im_k = k_of(z, m).imag
    if im_k <= 0:
        raise ValueError("truncation needs Im k(z) > 0")
    return extent + digits * np.log(10) / (2 * im_k) + 1.0


def hs_grid(L, N, breaks=(), order=16):
    """Composite GL nodes on ``[-L, L]`` with about ``N`` nodes, split at ``breaks``."""
    pts = [-L, 0.0, L] + [b for b in breaks if -L < b < L]
    n_panels = max(len(set(pts)) - 1, int(N) // order)
    edges = refine_breaks(pts, n_panels)
    return composite_gauss(edges, order)


def _tail(P, x, im_k):
    """Bound for ``int_{|x|>L} |P|^2`` from the exponential envelope at the ends."""
    sq = np.sum(np.abs(P) ** 2, axis=(-2, -1))
    ends = [int(np.argmin(x)), int(np.argmax(x))]
    return sum(sq[i] for i in ends) / (2 * im_k)


def hs_distance(A, m, z, eps, profile, truncation_L=None, grid_N=400, method="gram"):
    """HS distance between the approximate and the exact resolvent kernels.

    The difference is the finite-rank kernel ``P(x) Q(y)`` with
    ``P = [H, R_z(., 0)]`` and ``Q = [-T_eps A H~ ; T A R_z(0, .)]``.  With
    ``method="gram"`` the tensor-product sum over the grid is evaluated
    through the two 4x4 Gram matrices, with ``method="tensor"`` pair by
    pair (compiled kernel); both give the same number up to roundoff.
    """
    A = as_coupling(A)
    profile = profile_from_spec(profile)
    exact = resolvent_kernel(A, m, z)
    T_eps = _t_eps(A, m, z, eps, profile)
    extent = eps * profile.support_radius
    L = default_truncation(m, z, extent) if truncation_L is None else float(truncation_L)
    x, w = hs_grid(L, grid_N, breaks=[eps * b for b in profile.breakpoints])
    left_eps, right_eps = _approx_factors(m, z, eps, profile)
    left0, right0 = interface_factors(m, z)
    P = np.concatenate([left_eps(x), left0(x)], axis=-1)
    Q = np.concatenate([-T_eps @ A.matrix @ right_eps(x), -exact.core @ right0(x)], axis=-2)
    if method == "gram":
        Gp = np.einsum("i,iak,ial->kl", w, P.conj(), P)
        Gq = np.einsum("i,ika,ila->kl", w, Q, Q.conj())
        sq = float(np.real(np.trace(Gp @ Gq)))
    elif method == "tensor":
        empty = np.zeros((0, 2, 2), dtype=complex)
        sq = _backend.hs_sum(x, w, empty, empty, np.zeros(0, dtype=complex), P, Q)
    else:
        raise ValueError(f"unknown method {method!r}")
    im_k = k_of(z, m).imag
    gp = float(np.sum(w * np.sum(np.abs(P) ** 2, axis=(1, 2))))
    gq = float(np.sum(w * np.sum(np.abs(Q) ** 2, axis=(1, 2))))
    tail = _tail(P, x, im_k) * gq + gp * _tail(Q, x, im_k)
    return HSDistance(float(np.sqrt(max(sq, 0.0))), float(np.sqrt(tail)), float(L), int(x.size))


# --- eigenvalues --------------------------------------------------------------------------


@dataclass(frozen=True)
class ApproxEigenvalue:
    z: complex
    epsilon: float
    residual: float
    multiplicity: int = 1


def _check_region(region, m):
    x0, x1, y0, y1 = map(float, region)
    if not (x0 < x1 and y0 < y1):
        raise ValueError("region must satisfy x0 < x1 and y0 < y1")
    if y0 <= 0 <= y1:
        mm = abs(m)
        if m == 0 or x0 <= -mm or x1 >= mm:
            raise ValueError("region touches the cut (-inf, -|m|] U [|m|, inf)")
    return x0, x1, y0, y1


def approx_eigenvalues(A, m, eps, profile, region, tol=1e-12) -> List[ApproxEigenvalue]:
    """All zeros of ``eta_eps`` inside the rectangle ``region = (x0, x1, y0, y1)``.

    Raises :class:`ContourOnZeroError` when a zero lies on the boundary.
    """
    A = as_coupling(A)
    profile = profile_from_spec(profile)
    box = _check_region(region, m)
    if A.alpha == 0 and A.beta == 0 and A.gamma == 0 and A.delta == 0:
        return []
    f = lambda z: eta_epsilon(A, m, z, eps, profile)
    fd = lambda z: eta_epsilon(A, m, z, eps, profile, derivative=True)
    zeros = find_zeros(f, fd, box, tol=tol)
    return [ApproxEigenvalue(r.z, float(eps), r.residual, r.multiplicity) for r in zeros]


def spectral_enclosure(A, eps, profile):
    """``||A|| ||v||^2 / eps``: every eigenvalue has ``|Im z|`` at most this."""
    A = as_coupling(A)
    profile = profile_from_spec(profile)
    return float(np.linalg.norm(A.matrix, 2) * profile.l2_norm_sq / eps)


@dataclass(frozen=True)
class NonExpansionThreshold:
    """Scale below which a compact region holds no eigenvalues.

    ``exact`` is False when no root of ``alpha_1(w)^2 = 1`` with
    ``|w| <= search_radius`` was found; ``threshold`` is then the lower
    bound ``search_radius / max |k|``.
    """

    threshold: float
    exact: bool
    w_roots: Tuple[complex, ...] = field(default_factory=tuple)
    search_radius: float = 0.0


def nonexpansion_threshold(m, profile, region, search_radius=40.0, im_floor=1e-3):
    """Threshold ``eps_C`` for the whole-gap fixture (``alpha_1(eps k)^2 = 1``).

    Eigenvalues correspond to roots ``w`` in the upper half plane with
    ``w = eps k(z)``; none is reachable from the region while
    ``eps max|k| < min |w|``.
    """
    profile = profile_from_spec(profile)
    x0, x1, y0, y1 = _check_region(region, m)
    gx, gy = np.meshgrid(np.linspace(x0, x1, 41), np.linspace(y0, y1, 41))
    kmax = float(np.max(np.abs(k_of(gx + 1j * gy, m))))
    R = float(search_radius)

    def g(w):
        return alpha1(profile, w) ** 2 - 1

    def gd(w):
        a, da = alpha1(profile, w, derivative=True)
        return a * a - 1, 2 * a * da

    roots = find_zeros(g, gd, (-R, R, im_floor, R), tol=1e-12)
    ws = tuple(r.z for r in roots)
    if ws:
        return NonExpansionThreshold(min(abs(w) for w in ws) / kmax, True, ws, R)
    return NonExpansionThreshold(R / kmax, False, (), R)
