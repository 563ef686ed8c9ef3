"""
Boundary of the variability region V(z0, lambda) of int_0^{z0} P.

The boundary is traced by theta -> int_0^{z0} H_{e^{i theta},lambda}.  Two
independent evaluations are provided: straight-segment quadrature of the
kernel, and a partial-fraction closed form with principal logarithms.  When
z0 = 0 or |lambda| = 1 the region collapses to one point.
"""

from __future__ import annotations

import cmath
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import InvalidParams
from .kernels import ClassParams, extremal_H
from .numerics import DEFAULT_QUAD, Polygon, QuadratureConfig, integrate_segment


class Method(str, Enum):
    QUADRATURE = "quadrature"
    CLOSED_FORM = "closed"


@dataclass(frozen=True, eq=False)
class BoundaryCurve:
    params: object
    thetas: np.ndarray
    points: np.ndarray
    method: Method

    def __post_init__(self):
        if len(self.thetas) != len(self.points) or len(self.points) < 3:
            raise InvalidParams("a boundary curve needs matching thetas/points, at least 3 of them")
        if np.any(np.diff(self.thetas) <= 0):
            raise InvalidParams("thetas must be strictly increasing")

    def __len__(self):
        return len(self.points)

    def polygon(self) -> Polygon:
        return Polygon(self.points)

    def max_gap(self) -> float:
        """Largest distance between consecutive samples, wrap-around included."""
        return float(np.max(np.abs(np.roll(self.points, -1) - self.points)))


@dataclass(frozen=True)
class PointRegion:
    """The degenerate region: a single value."""
    params: object
    value: complex


@dataclass(frozen=True)
class ClosedFormTerms:
    b: float
    sqrt_term: float
    z1: complex
    z2: complex
    K: complex


def theta_grid(n: int) -> np.ndarray:
    """n uniformly spaced angles in (-pi, pi], increasing, ending at pi."""
    return -math.pi + 2 * math.pi * np.arange(1, n + 1) / n


def closed_form_terms(theta: float, p: ClassParams) -> ClosedFormTerms:
    half = cmath.exp(0.5j * theta)
    b = (p.lam.conjugate() * half).imag
    s = math.sqrt(1 - b * b)
    K = cmath.exp(-1j * p.gamma) * (1 - p.beta) * half.conjugate() * math.cos(p.gamma) / s
    return ClosedFormTerms(b=b, sqrt_term=s, z1=half.conjugate() * (1j * b + s),
                           z2=half.conjugate() * (1j * b - s), K=K)


def _require_open_lambda(p: ClassParams):
    if p.unimodular or abs(p.lam) >= 1:
        raise InvalidParams("|lambda| = 1 gives a one-point region; use degenerate_point")


def boundary_point_closed_form(theta, p: ClassParams):
    """
    Closed-form boundary value for one angle or an array of angles.

    Both logarithm arguments are 1 + u with |u| = |z0| < 1, so the principal
    branch is the right one; a non-positive real part is a formula error and
    raises.
    """
    _require_open_lambda(p)
    th = np.asarray(theta, dtype=float)
    half = np.exp(0.5j * th)
    lam_bar = p.lam.conjugate()
    b = (lam_bar * half).imag
    s = np.sqrt(1 - b * b)
    K = cmath.exp(-1j * p.gamma) * (1 - p.beta) * np.conj(half) * math.cos(p.gamma) / s
    arg_plus = 1 + half * p.z0 / (s - 1j * b)
    arg_minus = 1 - half * p.z0 / (s + 1j * b)
    if np.any(arg_plus.real <= 0) or np.any(arg_minus.real <= 0):
        raise ArithmeticError("closed-form logarithm argument left the right half-plane")
    value = ((1 - p.weight) * p.z0
             + K * ((1 + lam_bar * half * (-s + 1j * b)) * np.log(arg_plus)
                    - (1 + lam_bar * half * (s + 1j * b)) * np.log(arg_minus)))
    return complex(value) if value.ndim == 0 else value


def boundary_point_lambda0(theta, p: ClassParams):
    """lambda = 0 specialisation: (1 - weight) z0 + (weight/2) e^{-i theta/2} log((1+u)/(1-u)), u = e^{i theta/2} z0."""
    if p.lam != 0:
        raise InvalidParams("boundary_point_lambda0 requires lambda = 0")
    half = np.exp(0.5j * np.asarray(theta, dtype=float))
    u = half * p.z0
    value = ((1 - p.weight) * p.z0
             + 0.5 * p.weight * np.conj(half) * np.log((1 + u) / (1 - u)))
    return complex(value) if value.ndim == 0 else value


def boundary_point_quadrature(theta: float, p: ClassParams,
                              cfg: QuadratureConfig = DEFAULT_QUAD) -> complex:
    """int_0^{z0} H_{e^{i theta},lambda} along the segment; also valid for |lambda| = 1."""
    a = cmath.exp(1j * float(theta))
    return integrate_segment(lambda z: extremal_H(z, a, p), 0j, p.z0, cfg)


def _map(fn, items, threads):
    if threads is not None and threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(fn, items))
    return [fn(x) for x in items]


def boundary_curve(p: ClassParams, n_samples: int = 720, method=Method.CLOSED_FORM,
                   cfg: QuadratureConfig = DEFAULT_QUAD, threads: int | None = None):
    """
    Sample the boundary uniformly in theta.  Returns a PointRegion for the
    degenerate cases z0 = 0 and |lambda| = 1.
    """
    if p.degenerate:
        return PointRegion(p, degenerate_point(p))
    if n_samples < 16:
        raise InvalidParams(f"n_samples must be >= 16, got {n_samples}")
    method = Method(method)
    thetas = theta_grid(n_samples)
    if method is Method.CLOSED_FORM:
        points = boundary_point_closed_form(thetas, p)
    else:
        points = np.array(_map(lambda t: boundary_point_quadrature(t, p, cfg), thetas, threads))
    return BoundaryCurve(p, thetas, np.asarray(points, dtype=complex), method)


def _log_ratio(lam: complex, z0: complex) -> complex:
    """(1/lambda) log(1 - lambda z0), continuous through lambda = 0."""
    if abs(lam) < 1e-6:
        return -z0 - lam * z0**2 / 2 - lam**2 * z0**3 / 3 - lam**3 * z0**4 / 4
    return cmath.log(1 - lam * z0) / lam


def _center_value(p: ClassParams) -> complex:
    return p.z0 - p.weight * (p.z0 + _log_ratio(p.lam, p.z0))


def degenerate_point(p: ClassParams) -> complex:
    """The single point of V when z0 = 0 or |lambda| = 1."""
    if p.z0 == 0:
        return 0j
    if not p.unimodular:
        raise InvalidParams("degenerate_point needs z0 = 0 or |lambda| = 1")
    return _center_value(p)


def interior_center(p: ClassParams, cfg: QuadratureConfig = DEFAULT_QUAD,
                    cross_check: bool = True) -> complex:
    """
    int_0^{z0} H_{0,lambda}, an interior point of V for |lambda| < 1, z0 != 0.

    The logarithmic closed form is returned; with ``cross_check`` it is also
    compared against quadrature of H_{0,lambda}.
    """
    _require_open_lambda(p)
    if p.z0 == 0:
        raise InvalidParams("interior_center needs z0 != 0")
    if p.lam == 0:
        return p.z0
    value = _center_value(p)
    if cross_check:
        quad = integrate_segment(lambda z: extremal_H(z, 0j, p), 0j, p.z0, cfg)
        if abs(quad - value) > 1e-8 * max(1.0, abs(value)):
            raise ArithmeticError(f"interior center mismatch: closed {value}, quadrature {quad}")
    return value
