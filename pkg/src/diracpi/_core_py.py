"""Pure-Python/numpy implementations of the hot kernels.

These mirror ``_core.pyx`` exactly and are used when the compiled extension
is unavailable or ``DIRACPI_BACKEND=python`` is set.
"""

import numpy as np


def exp_kernel_apply(x, w, f, kappa):
    """One-sided exponential sums on a sorted grid.

    Returns ``(left, right)`` with

        left[i]  = sum_{j < i} exp(i kappa (x_i - x_j)) w_j f_j
        right[i] = sum_{j > i} exp(i kappa (x_j - x_i)) w_j f_j

    computed by the O(n) recurrence.  ``f`` has shape ``(n, d)``.
    """
    x = np.ascontiguousarray(x, dtype=float)
    w = np.ascontiguousarray(w, dtype=float)
    f = np.ascontiguousarray(f, dtype=complex)
    n = x.shape[0]
    left = np.zeros_like(f)
    right = np.zeros_like(f)
    step = np.exp(1j * complex(kappa) * np.diff(x))
    wf = w[:, None] * f
    acc = np.zeros(f.shape[1], dtype=complex)
    for i in range(1, n):
        acc = step[i - 1] * (acc + wf[i - 1])
        left[i] = acc
    acc = np.zeros(f.shape[1], dtype=complex)
    for i in range(n - 2, -1, -1):
        acc = step[i] * (acc + wf[i + 1])
        right[i] = acc
    return left, right


def hs_sum(x, w, even, odd, kappa, P, Q, chunk=256):
    """Weighted Frobenius sum ``sum_ij w_i w_j |F(x_i - x_j) + P_i Q_j|^2``.

    ``F(d) = sum_t (even_t + sgn(d) odd_t) exp(i kappa_t |d|)`` with
    ``sgn(0) = 0``.  Shapes: ``even, odd`` ``(T, 2, 2)``, ``kappa`` ``(T,)``,
    ``P`` ``(n, 2, r)``, ``Q`` ``(n, r, 2)``.
    """
    x = np.asarray(x, dtype=float)
    w = np.asarray(w, dtype=float)
    even = np.asarray(even, dtype=complex).reshape(-1, 2, 2)
    odd = np.asarray(odd, dtype=complex).reshape(-1, 2, 2)
    kappa = np.asarray(kappa, dtype=complex).reshape(-1)
    P = np.asarray(P, dtype=complex)
    Q = np.asarray(Q, dtype=complex)
    n = x.shape[0]
    total = 0.0
    for start in range(0, n, chunk):
        stop = min(start + chunk, n)
        d = x[start:stop, None] - x[None, :]
        s = np.sign(d)[..., None, None]
        ad = np.abs(d)
        block = np.einsum("iar,jrb->ijab", P[start:stop], Q)
        for t in range(kappa.shape[0]):
            block += (even[t] + s * odd[t]) * np.exp(1j * kappa[t] * ad)[..., None, None]
        mag = np.sum(block.real**2 + block.imag**2, axis=(2, 3))
        total += float(w[start:stop] @ mag @ w)
    return total
