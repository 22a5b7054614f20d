"""Pointwise-evaluable 2x2 integral kernels.

All resolvent kernels in this package have the same shape::

    K(x, y) = sum_t (E_t + sgn(x - y) O_t) exp(i kappa_t |x - y|)
              + L(x) C Rt(y)

a sum of translation-invariant "free" pieces plus a finite-rank correction
with left factor ``L(x)`` of shape ``(2, r)``, core ``C`` of shape ``(r, r)``
and right factor ``Rt(y)`` of shape ``(r, 2)``.  Keeping the structure
explicit lets the quadrature routines treat the free part with an O(N)
recurrence and the finite-rank part with Gram matrices.

Coincidences are never resolved by ``sgn(0)`` silently: ``side`` tells on
which side of ``y`` (and of the interaction point 0) the point ``x`` lies,
``yside`` does the same for ``y`` relative to 0.  ``side=0`` requests the
average of the two one-sided limits, which is what trapezoid-type
quadrature needs at a node.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional, Tuple

import numpy as np


def signum(d, side):
    """``sgn(d)`` with ties broken by ``side`` (which may be 0)."""
    d = np.asarray(d, dtype=float)
    return np.where(d > 0, 1.0, np.where(d < 0, -1.0, float(side)))


@dataclass(frozen=True)
class FreePart:
    """Translation-invariant piece ``(even + sgn(x-y) odd) exp(i kappa |x-y|)``."""

    even: np.ndarray
    odd: np.ndarray
    kappa: complex

    def __call__(self, x, y, side=1):
        d = np.asarray(x, dtype=float) - np.asarray(y, dtype=float)
        s = signum(d, side)[..., None, None]
        phase = np.exp(1j * self.kappa * np.abs(d))[..., None, None]
        return (self.even + s * self.odd) * phase


@dataclass(frozen=True)
class KernelEvaluator:
    """Immutable kernel ``free parts + left(x) @ core @ right(y)``.

    ``left(x, side)`` must return an array of shape ``x.shape + (2, r)`` and
    ``right(y, yside)`` one of shape ``y.shape + (r, 2)``.
    """

    free: Tuple[FreePart, ...] = ()
    left: Optional[Callable] = None
    core: Optional[np.ndarray] = None
    right: Optional[Callable] = None
    params: dict = field(default_factory=dict)

    @property
    def rank(self):
        return 0 if self.core is None else self.core.shape[0]

    def free_part(self, x, y, side=1):
        x, y = np.broadcast_arrays(np.asarray(x, float), np.asarray(y, float))
        out = np.zeros(x.shape + (2, 2), dtype=complex)
        for part in self.free:
            out = out + part(x, y, side)
        return out

    def correction(self, x, y, side=1, yside=1):
        x, y = np.broadcast_arrays(np.asarray(x, float), np.asarray(y, float))
        if self.core is None:
            return np.zeros(x.shape + (2, 2), dtype=complex)
        return self.left(x, side) @ self.core @ self.right(y, yside)

    def evaluate(self, x, y, side=1, yside=1):
        """Kernel value(s); broadcasts ``x`` and ``y``, shape ``(..., 2, 2)``."""
        return self.free_part(x, y, side) + self.correction(x, y, side, yside)

    __call__ = evaluate


def dirac_free_part(Z, k, scale=1.0):
    """Free Dirac kernel ``(i scale / 2)(Z + sgn sigma_1) e^{ik|x-y|}``."""
    from .spectral_core import SIGMA1

    return FreePart(
        even=0.5j * scale * np.asarray(Z, dtype=complex),
        odd=0.5j * scale * SIGMA1,
        kappa=complex(k),
    )
