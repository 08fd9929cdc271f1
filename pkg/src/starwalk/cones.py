"""The glued-truncated-cones family and its axis cross-sectional densities.

Two rotational cones are truncated so the removed tip holds an ``eta``
fraction of each cone's volume and glued at the truncation disks, giving a
star-shaped body whose kernel occupies roughly an eta fraction of the volume.
The family is the standard worst case for diameter-based isoperimetry of
star-shaped sets: the neck at the gluing site is the bottleneck.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy.integrate import quad

from .bodies import StarBody, _as_batch, _payload, TC_GLUED

__all__ = [
    "GluedCones",
    "make_glued_cones",
    "Density1D",
    "cross_density_body",
    "cross_density_kernel",
    "asymptotic_densities",
    "kernel_mass_ratio",
]


def truncation_length(n: int, eta: float) -> float:
    """Closed form l with (1 - l/sqrt(n(n+2)))^n = eta."""
    return math.sqrt(n * (n + 2)) * (1.0 - eta ** (1.0 / n))


class GluedCones(StarBody):
    """Mirror-glued truncated cones, rotationally symmetric about axis 0.

    ``axis_scale`` shrinks the transverse directions (the construction's final
    scaling step that collapses the body onto its axis); the axis marginal is
    unchanged by it.
    """

    def __init__(self, n: int, eta: float, axis_scale: float = 1.0):
        if n < 2:
            raise ValueError("dimension must be >= 2")
        if not 0.0 < eta < 1.0:
            raise ValueError("eta must lie in (0, 1)")
        s = math.sqrt(n * (n + 2))
        l = truncation_length(n, eta)
        if 2.0 * l > s * (1.0 + 1e-12):
            raise ValueError(f"n={n} is below the threshold for eta={eta} (needs eta >= 2^-n)")
        if axis_scale <= 0:
            raise ValueError("axis_scale must be positive")
        self._dim = int(n)
        self.eta = float(eta)
        self.l = l
        self.s = s
        self.axis_scale = float(axis_scale)

    def _radii(self, t: np.ndarray, kern: bool) -> np.ndarray:
        sgn = 1.0 if kern else -1.0
        return self.axis_scale * (1.0 - (self.l + sgn * t) / self.s)

    def contains_many(self, X):
        X = _as_batch(X, self.dim)
        t = np.abs(X[:, 0])
        rho2 = np.einsum("ij,ij->i", X[:, 1:], X[:, 1:])
        rad = self._radii(t, kern=False)
        return (t <= self.l) & (rho2 <= rad * rad)

    def kernel_contains_many(self, X):
        X = _as_batch(X, self.dim)
        t = np.abs(X[:, 0])
        rho2 = np.einsum("ij,ij->i", X[:, 1:], X[:, 1:])
        rad = self._radii(t, kern=True)
        return (t <= self.l) & (rad >= 0.0) & (rho2 <= rad * rad)

    def interior_point(self):
        return np.zeros(self.dim)

    def radius_bound(self):
        return math.hypot(self.l, self.axis_scale)

    def diameter_bound(self):
        # achieved between opposite rim points of the two outer disks
        return 2.0 * math.hypot(self.l, self.axis_scale)

    def kernel_ball(self):
        sc, s = self.axis_scale, self.s
        r0 = sc * (1.0 - self.l / s)  # neck radius (widest kernel section)
        lateral = r0 * s / math.hypot(s, sc)
        return np.zeros(self.dim), float(min(self.l, lateral))

    def proposal_box(self):
        lo = -np.ones(self.dim) * self.axis_scale
        hi = np.ones(self.dim) * self.axis_scale
        lo[0], hi[0] = -self.l, self.l
        return lo, hi

    def proposal_sample(self, rng, count):
        # bounding cylinder: uniform axis coordinate x uniform transverse ball
        n = self.dim
        x = np.empty((count, n))
        x[:, 0] = rng.random(count) * (2 * self.l) - self.l
        d = rng.standard_normal((count, n - 1))
        d /= np.maximum(np.linalg.norm(d, axis=1), 1e-300)[:, None]
        rad = self.axis_scale * rng.random(count) ** (1.0 / (n - 1))
        x[:, 1:] = d * rad[:, None]
        return x

    def accel_payload(self):
        return _payload(TC_GLUED, self.dim, fpar=[self.l, self.s, self.axis_scale])


def make_glued_cones(n: int, eta: float, axis_scale: float = 1.0) -> GluedCones:
    return GluedCones(n, eta, axis_scale)


@dataclass(frozen=True)
class Density1D:
    """A one-dimensional density: callable plus closed support interval."""

    evaluate: Callable[[np.ndarray], np.ndarray]
    support: tuple[float, float]
    raw_mass: float = 1.0  # integral of the un-normalized formula
    mass: float = 1.0  # integral of evaluate over the support

    def __call__(self, x):
        return self.evaluate(np.asarray(x, dtype=np.float64))

    def cdf_grid(self, points: int = 4001) -> tuple[np.ndarray, np.ndarray]:
        """Cumulative integral on a uniform grid (trapezoid), for KS tests."""
        xs = np.linspace(self.support[0], self.support[1], points)
        ys = self.evaluate(xs)
        cdf = np.concatenate([[0.0], np.cumsum((ys[1:] + ys[:-1]) * 0.5 * np.diff(xs))])
        return xs, cdf


def _raw_pair(n: int, eta: float):
    s = math.sqrt(n * (n + 2))
    l = truncation_length(n, eta)
    pref = s / (2.0 * (1.0 - eta) * n)

    def raw_body(x):
        x = np.asarray(x, dtype=np.float64)
        t = np.abs(x)
        val = pref * (1.0 - (l - t) / s) ** (n - 1)
        return np.where(t <= l, val, 0.0)

    def raw_kernel(x):
        x = np.asarray(x, dtype=np.float64)
        t = np.abs(x)
        base = 1.0 - (l + t) / s
        val = pref * np.where(base > 0.0, base, 0.0) ** (n - 1)
        return np.where((t <= l) & (base >= 0.0), val, 0.0)

    return l, raw_body, raw_kernel


def _body_raw_mass(n: int, eta: float) -> float:
    l, raw_body, _ = _raw_pair(n, eta)
    val, _ = quad(lambda t: float(raw_body(t)), 0.0, l, limit=200)
    return 2.0 * val


def cross_density_body(n: int, eta: float) -> Density1D:
    """Axis marginal of the glued-cones body, renormalized to unit mass.

    The closed-form expression integrates to (n+2)/n, exact mass 1 only in the
    n -> infinity limit; the raw constant is kept on the result.
    """
    l, raw_body, _ = _raw_pair(n, eta)
    raw_mass = _body_raw_mass(n, eta)

    def evaluate(x):
        return raw_body(x) / raw_mass

    return Density1D(evaluate, (-l, l), raw_mass=raw_mass, mass=1.0)


def cross_density_kernel(n: int, eta: float) -> Density1D:
    """Axis marginal of the kernel on the body's scale (integral = kernel mass
    relative to the body, not 1)."""
    l, _, raw_kernel = _raw_pair(n, eta)
    raw_mass = _body_raw_mass(n, eta)

    def evaluate(x):
        return raw_kernel(x) / raw_mass

    rel, _ = quad(lambda t: float(raw_kernel(t)), 0.0, l, limit=200)
    return Density1D(evaluate, (-l, l), raw_mass=raw_mass, mass=2.0 * rel / raw_mass)


def kernel_mass_ratio(n: int, eta: float) -> float:
    """Kernel volume fraction of the glued cones, by quadrature of the axis
    marginals (the transverse factors cancel)."""
    return cross_density_kernel(n, eta).mass


def asymptotic_densities(eta: float) -> tuple[Density1D, Density1D]:
    """Limit pair of axis densities: body density grows like e^|x| toward the
    rims, kernel density decays like e^-|x|, both on [-ln(1/eta), ln(1/eta)]."""
    if not 0.0 < eta < 1.0:
        raise ValueError("eta must lie in (0, 1)")
    L = math.log(1.0 / eta)
    c = eta / (2.0 * (1.0 - eta))

    def f_body(x):
        x = np.asarray(x, dtype=np.float64)
        return np.where(np.abs(x) <= L, c * np.exp(np.abs(x)), 0.0)

    def f_kernel(x):
        x = np.asarray(x, dtype=np.float64)
        return np.where(np.abs(x) <= L, c * np.exp(-np.abs(x)), 0.0)

    return (
        Density1D(f_body, (-L, L), raw_mass=1.0, mass=1.0),
        Density1D(f_kernel, (-L, L), raw_mass=eta, mass=eta),
    )
