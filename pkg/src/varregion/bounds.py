"""
Pointwise growth disks for P(lambda), the enclosure disk of the region along
a path, and the auxiliary function G whose cube root is starlike.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .errors import BranchAmbiguity, InvalidParams
from .kernels import ClassParams
from .numerics import DEFAULT_QUAD, QuadratureConfig, as_cx, integrate_interval, integrate_segment


@dataclass(frozen=True)
class GrowthBound:
    c: complex
    r: float


@dataclass(frozen=True)
class MobiusTriple:
    A: complex
    B: complex
    tau: complex


@dataclass(frozen=True)
class DiskBound:
    center: complex
    radius: float

    def contains(self, w, slack: float = 0.0) -> bool:
        return abs(complex(w) - self.center) <= self.radius + slack


def _denominator(z: complex, lam: complex) -> float:
    az2 = abs(z) ** 2
    return (1 - az2) * (1 + az2 - 2 * (lam * z).real)


def growth_bound(z, p: ClassParams) -> GrowthBound:
    """Center c(z, lambda) and radius r(z, lambda) of the disk that holds P(z) for every member P."""
    z = as_cx(z, "z")
    if abs(z) >= 1:
        raise InvalidParams(f"|z| must be < 1, got {z}")
    lam = p.lam
    rot = cmath.exp(-1j * p.gamma)
    k = (rot - 2 * p.beta * math.cos(p.gamma)) * rot
    den = _denominator(z, lam)
    zb = z.conjugate()
    c = ((1 + lam * z * k) * (1 - lam.conjugate() * zb)
         + abs(z) ** 2 * (zb - lam) * (lam.conjugate() + z * k)) / den
    r = 2 * (1 - abs(lam) ** 2) * (1 - p.beta) * abs(z) ** 2 * math.cos(p.gamma) / den
    return GrowthBound(complex(c), max(float(r), 0.0))


def growth_bound_lambda0(z, p: ClassParams) -> GrowthBound:
    """lambda = 0, gamma = 0 case: c = (1 + (1-2beta)|z|^4)/(1-|z|^4), r = 2(1-beta)|z|^2/(1-|z|^4)."""
    if p.lam != 0:
        raise InvalidParams("growth_bound_lambda0 requires lambda = 0")
    if p.gamma != 0:
        raise InvalidParams("growth_bound_lambda0 requires gamma = 0; use growth_bound")
    z = as_cx(z, "z")
    m2 = abs(z) ** 2
    m4 = m2 * m2
    return GrowthBound(complex((1 + (1 - 2 * p.beta) * m4) / (1 - m4)),
                       2 * (1 - p.beta) * m2 / (1 - m4))


def mobius_triple(z, p: ClassParams) -> MobiusTriple:
    z = as_cx(z, "z")
    lam = p.lam
    rot = cmath.exp(-1j * p.gamma)
    k = rot - 2 * p.beta * math.cos(p.gamma)
    A = (1 + rot * lam * z * k) / (1 - lam * z)
    B = (lam.conjugate() + rot * z * k) / (z - lam.conjugate())
    tau = (z - lam.conjugate()) / (1 - lam * z)
    return MobiusTriple(A, B, tau)


@dataclass(frozen=True)
class StraightPath:
    """z(t) = t * z0 on [0, 1]."""
    z0: complex

    def point(self, t):
        return t * self.z0

    def velocity(self, t):
        return np.full(np.shape(t), self.z0, dtype=complex)


def enclosure_disk(p: ClassParams, path=None, cfg: QuadratureConfig = DEFAULT_QUAD) -> DiskBound:
    """
    Disk containing the whole region: center = int c(z(t)) z'(t) dt and
    radius = int r(z(t)) |z'(t)| dt over t in [0, 1].

    ``path`` needs ``point(t)`` and ``velocity(t)`` on arrays of t; it
    defaults to the segment from 0 to z0.
    """
    if path is None:
        path = StraightPath(p.z0)
    if p.z0 == 0:
        return DiskBound(0j, 0.0)

    def center_integrand(t):
        zs = path.point(t)
        return np.array([growth_bound(z, p).c for z in zs]) * path.velocity(t)

    def radius_integrand(t):
        zs = path.point(t)
        return np.array([growth_bound(z, p).r for z in zs]) * np.abs(path.velocity(t))

    center = integrate_interval(center_integrand, 0.0, 1.0, cfg)
    radius = integrate_interval(radius_integrand, 0.0, 1.0, cfg).real
    return DiskBound(center, radius)


def _g_integrand(theta: float, lam: complex):
    rot = cmath.exp(1j * theta)
    lin = lam.conjugate() * rot - lam

    def f(zeta):
        return rot * zeta**2 / (1 + lin * zeta - rot * zeta**2) ** 2
    return f


def lemma_G(z, theta: float, lam, cfg: QuadratureConfig = DEFAULT_QUAD) -> complex:
    """G(z) = int_0^z e^{i theta} s^2 / (1 + (conj(lambda) e^{i theta} - lambda) s - e^{i theta} s^2)^2 ds."""
    z = as_cx(z, "z")
    lam = as_cx(lam, "lambda")
    if abs(z) >= 1 or abs(lam) >= 1:
        raise InvalidParams("lemma_G needs |z| < 1 and |lambda| < 1")
    return integrate_segment(_g_integrand(theta, lam), 0j, z, cfg)


def lemma_G_derivative(z, theta: float, lam) -> complex:
    return complex(_g_integrand(theta, as_cx(lam))(np.asarray(as_cx(z))))


def _nearest_cube_root(q: complex, ref: complex) -> complex:
    root = q ** (1 / 3)
    turns = [root * cmath.exp(2j * math.pi * k / 3) for k in range(3)]
    return min(turns, key=lambda w: abs(w - ref))


_G0_START = 1e-3
_G0_STEPS = 24


def _G0_with_state(z: complex, theta: float, lam: complex, cfg: QuadratureConfig):
    """Continue q(s) = 3 e^{-i theta} G(s) / s^3 (q(0) = 1) radially and return (G0(z), G(z), q^{1/3})."""
    if abs(z) < _G0_START:
        raise BranchAmbiguity(f"|z| = {abs(z):.2e} is too close to 0 for cube-root continuation")
    f = _g_integrand(theta, lam)
    unit = z / abs(z)
    radii = np.geomspace(_G0_START, abs(z), _G0_STEPS)
    s_prev = radii[0] * unit
    G = integrate_segment(f, 0j, s_prev, cfg)
    root = _nearest_cube_root(3 * cmath.exp(-1j * theta) * G / s_prev**3, 1.0)
    for rad in radii[1:]:
        s = rad * unit
        G += integrate_segment(f, s_prev, s, cfg)
        root = _nearest_cube_root(3 * cmath.exp(-1j * theta) * G / s**3, root)
        s_prev = s
    return z * root, G, root


def lemma_G0(z, theta: float, lam, cfg: QuadratureConfig = DEFAULT_QUAD) -> complex:
    """
    The starlike cube root G0 with G = (1/3) e^{i theta} G0^3, normalised by
    G0(0) = 0, G0'(0) = 1.  Branch fixed by radial continuation from 0.
    """
    z = as_cx(z, "z")
    lam = as_cx(lam, "lambda")
    return _G0_with_state(z, float(theta), lam, cfg)[0]


def lemma_G0_starlike_check(theta: float, lam, grid, cfg: QuadratureConfig = DEFAULT_QUAD,
                            rel_step: float = 1e-5) -> float:
    """
    min over the grid of Re(z G0'(z) / G0(z)), with G0' from central
    differences of step ``rel_step * |z|``.  A positive result certifies
    starlikeness on the grid.
    """
    lam = as_cx(lam, "lambda")
    theta = float(theta)
    if abs(lam) >= 1:
        raise InvalidParams("lemma_G0_starlike_check needs |lambda| < 1")
    f = _g_integrand(theta, lam)
    rot_back = 3 * cmath.exp(-1j * theta)
    worst = math.inf
    for z in grid:
        z = as_cx(z, "grid point")
        if abs(z) >= 1:
            raise InvalidParams("grid points must lie in the unit disk")
        g0, G, root = _G0_with_state(z, theta, lam, cfg)

        def G0_near(w):
            Gw = G + integrate_segment(f, z, w, cfg)
            return w * _nearest_cube_root(rot_back * Gw / w**3, root)

        h = rel_step * abs(z)
        d1 = (G0_near(z + h) - G0_near(z - h)) / (2 * h)
        d2 = (G0_near(z + h / 2) - G0_near(z - h / 2)) / h
        deriv = (4 * d2 - d1) / 3
        worst = min(worst, (z * deriv / g0).real)
    return worst
