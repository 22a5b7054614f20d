"""Approximation profiles ``v`` with unit integral.

A profile supplies its values, the squared L2 norm and its autocorrelation
``rho(t) = int v(x) v(x + t) dx`` for ``t >= 0``.  All built-in profiles are
compactly supported, so every form-factor integral is over a finite range.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import erf, pi, sqrt

import numpy as np
from scipy.special import erf as verf

from .quadrature import composite_gauss


class Profile:
    """Base class.  Subclasses set ``name``, ``lo``, ``hi`` and ``breakpoints``."""

    name = "profile"
    lo = -0.5
    hi = 0.5
    #: points where ``v`` is not smooth (including the support ends)
    breakpoints = (-0.5, 0.5)
    #: points in ``[0, hi - lo]`` where ``rho`` is not smooth
    rho_breakpoints = (0.0, 1.0)
    compact = True

    @property
    def support_radius(self):
        return max(abs(self.lo), abs(self.hi))

    @property
    def rho_support(self):
        return self.hi - self.lo

    def evaluate(self, x):
        raise NotImplementedError

    def __call__(self, x):
        return self.evaluate(x)

    @property
    def l2_norm_sq(self):
        raise NotImplementedError

    def rho(self, t):
        raise NotImplementedError

    def panels(self, order=16, max_len=0.25):
        """Composite GL rule on the support, split at the breakpoints."""
        edges = [float(b) for b in self.breakpoints]
        fine = [edges[0]]
        for a, b in zip(edges[:-1], edges[1:]):
            n = max(1, int(np.ceil((b - a) / max_len)))
            fine.extend(np.linspace(a, b, n + 1)[1:])
        return composite_gauss(fine, order)

    def describe(self):
        return {"name": self.name, "support": [self.lo, self.hi]}


class Box(Profile):
    """Indicator of ``[-1/2, 1/2]``."""

    name = "box"
    lo, hi = -0.5, 0.5
    breakpoints = (-0.5, 0.5)
    rho_breakpoints = (0.0, 1.0)

    def evaluate(self, x):
        x = np.asarray(x, dtype=float)
        return np.where(np.abs(x) <= 0.5, 1.0, 0.0)

    @property
    def l2_norm_sq(self):
        return 1.0

    def rho(self, t):
        return np.clip(1.0 - np.abs(np.asarray(t, dtype=float)), 0.0, None)


class Triangle(Profile):
    """Hat function ``1 - |x|`` on ``[-1, 1]``."""

    name = "triangle"
    lo, hi = -1.0, 1.0
    breakpoints = (-1.0, 0.0, 1.0)
    rho_breakpoints = (0.0, 1.0, 2.0)

    def evaluate(self, x):
        x = np.asarray(x, dtype=float)
        return np.clip(1.0 - np.abs(x), 0.0, None)

    @property
    def l2_norm_sq(self):
        return 2.0 / 3.0

    def rho(self, t):
        # autocorrelation of the hat is the cubic B-spline
        t = np.abs(np.asarray(t, dtype=float))
        inner = 2.0 / 3.0 - t**2 + 0.5 * t**3
        outer = (2.0 - t) ** 3 / 6.0
        return np.where(t <= 1.0, inner, np.where(t <= 2.0, outer, 0.0))


class TruncatedGaussian(Profile):
    """Gaussian of width ``sigma`` cut to ``[-4 sigma, 4 sigma]`` and renormalized."""

    name = "gauss"

    def __init__(self, sigma=0.25, cutoff=4.0):
        if not sigma > 0:
            raise ValueError("sigma must be positive")
        self.sigma = float(sigma)
        self.a = cutoff * self.sigma
        self.lo, self.hi = -self.a, self.a
        self.breakpoints = (-self.a, 0.0, self.a)
        self.rho_breakpoints = (0.0, 2 * self.a)
        self._zn = self.sigma * sqrt(2 * pi) * erf(self.a / (self.sigma * sqrt(2)))

    def evaluate(self, x):
        x = np.asarray(x, dtype=float)
        g = np.exp(-0.5 * (x / self.sigma) ** 2) / self._zn
        return np.where(np.abs(x) <= self.a, g, 0.0)

    @property
    def l2_norm_sq(self):
        s = self.sigma
        return s * sqrt(pi) * erf(self.a / s) / self._zn**2

    def rho(self, t):
        t = np.abs(np.asarray(t, dtype=float))
        s = self.sigma
        val = (s * sqrt(pi) / self._zn**2) * np.exp(-(t**2) / (4 * s * s)) \
            * verf((self.a - 0.5 * t) / s)
        return np.where(t <= 2 * self.a, val, 0.0)

    def describe(self):
        return {"name": self.name, "support": [self.lo, self.hi], "sigma": self.sigma}


@dataclass
class Sampled(Profile):
    """Tabulated profile, linearly interpolated and renormalized to unit integral.

    ``normalization`` is the factor that was applied to the tabulated values.
    """

    x: np.ndarray
    v: np.ndarray
    normalization: float = field(init=False)
    name = "sampled"

    def __post_init__(self):
        x = np.asarray(self.x, dtype=float)
        v = np.asarray(self.v, dtype=float)
        if x.ndim != 1 or x.shape != v.shape or x.size < 2:
            raise ValueError("profile table needs two columns of equal length >= 2")
        if not np.all(np.isfinite(x)) or not np.all(np.isfinite(v)):
            raise ValueError("profile table contains non-finite values")
        if np.any(np.diff(x) <= 0):
            raise ValueError("profile abscissae must be strictly increasing")
        total = float(np.sum(0.5 * (v[1:] + v[:-1]) * np.diff(x)))
        if not total != 0:
            raise ValueError("tabulated profile has zero integral")
        self.normalization = 1.0 / total
        self.x, self.v = x, v * self.normalization
        self.x.setflags(write=False)
        self.v.setflags(write=False)
        self.lo, self.hi = float(x[0]), float(x[-1])
        self.breakpoints = tuple(x)
        self._rho_cache = {}
        self.rho_breakpoints = (0.0, self.hi - self.lo)

    @classmethod
    def from_file(cls, path):
        data = np.loadtxt(path, ndmin=2)
        if data.shape[1] != 2:
            raise ValueError(f"{path}: expected two columns (x, v)")
        return cls(data[:, 0], data[:, 1])

    def evaluate(self, x):
        return np.interp(np.asarray(x, dtype=float), self.x, self.v, left=0.0, right=0.0)

    @property
    def l2_norm_sq(self):
        # v is linear on each cell, so a 2-point Gauss rule per cell is exact
        nodes, weights = composite_gauss(self.x, 2)
        return float(np.sum(weights * self.evaluate(nodes) ** 2))

    def _rho_scalar(self, t):
        key = float(t)
        hit = self._rho_cache.get(key)
        if hit is None:
            lo, hi = self.lo, self.hi - t
            if hi <= lo:
                hit = 0.0
            else:
                # product of two piecewise-linear functions: exact with 2 nodes
                cuts = np.concatenate([self.x, self.x - t])
                cuts = np.unique(cuts[(cuts > lo) & (cuts < hi)])
                edges = np.concatenate([[lo], cuts, [hi]])
                nodes, weights = composite_gauss(edges, 2)
                hit = float(np.sum(weights * self.evaluate(nodes) * self.evaluate(nodes + t)))
            self._rho_cache[key] = hit
        return hit

    def rho(self, t):
        t = np.abs(np.asarray(t, dtype=float))
        out = np.array([self._rho_scalar(s) for s in t.ravel()])
        return out.reshape(t.shape)

    def describe(self):
        return {
            "name": self.name,
            "support": [self.lo, self.hi],
            "normalization": self.normalization,
        }


def profile_from_spec(spec):
    """Parse ``box``, ``triangle``, ``gauss``, ``gauss:<sigma>`` or ``file:<path>``."""
    if isinstance(spec, Profile):
        return spec
    key, _, arg = str(spec).partition(":")
    key = key.strip().lower()
    if key == "box":
        return Box()
    if key == "triangle":
        return Triangle()
    if key == "gauss":
        return TruncatedGaussian(float(arg)) if arg else TruncatedGaussian()
    if key == "file" and arg:
        return Sampled.from_file(arg)
    raise ValueError(f"unknown profile {spec!r}")
