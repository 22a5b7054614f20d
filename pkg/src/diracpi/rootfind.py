"""Zeros of analytic functions in rectangles via the argument principle.

The winding number is accumulated by phase continuation along the boundary:
every step is refined until the phase of ``f`` changes by less than pi/2.
Cells with more than one zero are quartered; cells with exactly one are
polished by Newton's method.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, List

import numpy as np

from .errors import ContourOnZeroError

_SPLITS = (0.5123, 0.4681, 0.5537, 0.4419)


@dataclass(frozen=True)
class Zero:
    z: complex
    residual: float
    multiplicity: int = 1


def _boundary(box, n):
    x0, x1, y0, y1 = box
    t = np.linspace(0.0, 1.0, n, endpoint=False)
    return np.concatenate([
        x0 + (x1 - x0) * t + 1j * y0,
        x1 + 1j * (y0 + (y1 - y0) * t),
        x1 - (x1 - x0) * t + 1j * y1,
        x0 + 1j * (y1 - (y1 - y0) * t),
    ])


def winding_number(f, box, n0=32, max_points=40000, zero_tol=1e-13):
    """Number of zeros of ``f`` inside ``box = (x0, x1, y0, y1)``.

    ``f`` must accept arrays.  Raises :class:`ContourOnZeroError` if ``f``
    (nearly) vanishes on the boundary or the phase cannot be resolved.
    """
    z = _boundary(box, n0)
    z = np.append(z, z[0])
    vals = np.asarray(f(z), dtype=complex)
    while True:
        if np.any(~np.isfinite(vals)):
            raise ContourOnZeroError("non-finite function value on the contour")
        scale = max(1.0, float(np.median(np.abs(vals))))
        if np.any(np.abs(vals) <= zero_tol * scale):
            raise ContourOnZeroError("function vanishes on the contour")
        dphi = np.angle(vals[1:] / vals[:-1])
        bad = np.nonzero(np.abs(dphi) >= 0.5 * np.pi)[0]
        if bad.size == 0:
            break
        if z.size + bad.size > max_points:
            raise ContourOnZeroError("phase along the contour cannot be resolved; "
                                     "a zero is probably on or very near the boundary")
        mids = 0.5 * (z[bad] + z[bad + 1])
        z = np.insert(z, bad + 1, mids)
        vals = np.insert(vals, bad + 1, np.asarray(f(mids), dtype=complex))
    total = float(np.sum(dphi)) / (2 * np.pi)
    count = int(round(total))
    if abs(total - count) > 0.05:
        raise ContourOnZeroError(f"non-integer winding number {total:.3f}")
    return count


def newton(fd, z0, mult=1, maxiter=60, tol=1e-15, radius=np.inf):
    """Newton iteration from ``z0``; gives up once ``|z - z0| > radius``."""
    z = complex(z0)
    for _ in range(maxiter):
        val, der = fd(z)
        if val == 0:
            return z, True
        if der == 0 or not np.isfinite(der):
            return z, False
        step = mult * val / der
        z -= step
        if not np.isfinite(z) or abs(z - z0) > radius:
            return z, False
        if abs(step) <= tol * max(1.0, abs(z)):
            return z, True
    return z, abs(step) <= 1e-10 * max(1.0, abs(z))


def _inside(z, box, margin=0.0):
    x0, x1, y0, y1 = box
    return x0 - margin <= z.real <= x1 + margin and y0 - margin <= z.imag <= y1 + margin


def find_zeros(f: Callable, fd: Callable, box, tol=1e-12, min_size=None) -> List[Zero]:
    """Zeros of ``f`` in ``box`` with multiplicities (counted by winding).

    ``fd(z)`` returns ``(f(z), f'(z))`` for a scalar ``z``.  ``tol`` is the
    level below which ``|f|`` on a contour counts as a zero on the contour.
    """
    box = tuple(float(b) for b in box)
    diam = max(box[1] - box[0], box[3] - box[2])
    if min_size is None:
        min_size = 1e-9 * max(1.0, diam)
    found: List[Zero] = []

    def polish(cell, count):
        x0, x1, y0, y1 = cell
        start = complex(0.5 * (x0 + x1), 0.5 * (y0 + y1))
        z, ok = newton(fd, start, mult=count, radius=2 * max(x1 - x0, y1 - y0))
        if ok and _inside(z, cell, 1e-12 * max(1.0, diam)):
            return z
        return None

    def split(cell, count):
        x0, x1, y0, y1 = cell
        last = None
        for frac in _SPLITS:
            xm = x0 + frac * (x1 - x0)
            ym = y0 + frac * (y1 - y0)
            quads = [(x0, xm, y0, ym), (xm, x1, y0, ym), (x0, xm, ym, y1), (xm, x1, ym, y1)]
            try:
                counts = [winding_number(f, q, zero_tol=tol) for q in quads]
            except ContourOnZeroError as exc:
                last = exc
                continue
            if sum(counts) == count:
                return list(zip(quads, counts))
            last = ContourOnZeroError("inconsistent winding numbers after splitting")
        raise last

    def visit(cell, count):
        if count == 0:
            return
        size = max(cell[1] - cell[0], cell[3] - cell[2])
        if count == 1 or size <= min_size:
            z = polish(cell, count)
            if z is not None:
                found.append(Zero(z, float(abs(fd(z)[0])), count))
                return
            if size <= min_size:
                raise ContourOnZeroError("Newton iteration failed in a minimal cell")
        for sub, c in split(cell, count):
            visit(sub, c)

    visit(box, winding_number(f, box, zero_tol=tol))
    found.sort(key=lambda r: (r.z.real, r.z.imag))
    return found
