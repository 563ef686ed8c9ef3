"""
Two univalent subclasses obtained by specialising gamma = 0:

* R_beta: Re f' > beta, with V_R = {f(z0)} and P = f'.
* F(alpha, beta): f' + alpha z f'' subordinate to (1 + (1-2beta) z)/(1 - z),
  with V_G = {(1 - alpha) f(z0) + alpha z0 f'(z0)}.

Both regions coincide with the gamma = 0 region of P(lambda); the functions
here compute them through their own formulas so the coincidence can be
checked.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .bounds import GrowthBound
from .errors import InvalidParams
from .kernels import ClassParams, mobius_delta
from .numerics import DEFAULT_QUAD, QuadratureConfig, as_cx, integrate_interval, integrate_segment
from .regions import BoundaryCurve, Method, _map, theta_grid

ALPHA_ONE_TOL = 1e-9


@dataclass(frozen=True)
class SubclassParamsR:
    beta: float
    lam: complex
    z0: complex

    def __post_init__(self):
        # reuse the P-class validation with gamma = 0
        cp = self.as_class_params()
        object.__setattr__(self, "beta", cp.beta)
        object.__setattr__(self, "lam", cp.lam)
        object.__setattr__(self, "z0", cp.z0)

    def as_class_params(self) -> ClassParams:
        return ClassParams(0.0, self.beta, self.lam, self.z0)


@dataclass(frozen=True)
class SubclassParamsF:
    alpha: complex
    beta: float
    lam: complex
    z0: complex

    def __post_init__(self):
        alpha = as_cx(self.alpha, "alpha")
        if alpha.real <= 0:
            raise InvalidParams(f"alpha must have positive real part, got {alpha}")
        beta = float(self.beta)
        if not (math.isfinite(beta) and beta < 1):
            raise InvalidParams(f"beta must be < 1, got {self.beta}")
        lam = as_cx(self.lam, "lambda")
        z0 = as_cx(self.z0, "z0")
        if abs(lam) > 1 or abs(z0) >= 1:
            raise InvalidParams("need |lambda| <= 1 and |z0| < 1")
        object.__setattr__(self, "alpha", alpha)
        object.__setattr__(self, "beta", beta)
        object.__setattr__(self, "lam", lam)
        object.__setattr__(self, "z0", z0)

    def as_class_params(self) -> ClassParams:
        return ClassParams(0.0, self.beta, self.lam, self.z0)


def _require_curve_domain(lam: complex, z0: complex):
    if abs(lam) >= 1:
        raise InvalidParams("the boundary curve needs |lambda| < 1")
    if z0 == 0:
        raise InvalidParams("the boundary curve needs z0 != 0")


def vR_point(theta: float, pr: SubclassParamsR, cfg: QuadratureConfig = DEFAULT_QUAD) -> complex:
    """z0 + 2(1-beta) int_0^{z0} (e^{i theta} s + lambda) s / (1 + conj(lambda) e^{i theta} s - (e^{i theta} s + lambda) s) ds."""
    rot = cmath.exp(1j * theta)
    lam = pr.lam

    def f(s):
        num = (rot * s + lam) * s
        return num / (1 + lam.conjugate() * rot * s - num)

    return pr.z0 + 2 * (1 - pr.beta) * integrate_segment(f, 0j, pr.z0, cfg)


def vR_boundary(pr: SubclassParamsR, n: int = 720, cfg: QuadratureConfig = DEFAULT_QUAD,
                threads: int | None = None) -> BoundaryCurve:
    _require_curve_domain(pr.lam, pr.z0)
    if n < 16:
        raise InvalidParams(f"n must be >= 16, got {n}")
    thetas = theta_grid(n)
    pts = np.array(_map(lambda t: vR_point(t, pr, cfg), thetas, threads))
    return BoundaryCurve(pr, thetas, pts, Method.QUADRATURE)


def _f_prime_H10(z, beta):
    z2 = z * z
    return (1 + (1 - 2 * beta) * z2) / (1 - z2)


def _f_prime_displayed(z, beta):
    # derivative of beta z + ((1-beta)/2) log((1+z)/(1-z))
    return beta + (1 - beta) / (1 - z * z)


def rbeta_sup_bound_check(beta: float, grid_radius: float, n_grid: int,
                          extremal: str = "H10") -> tuple[float, float]:
    """
    Grid supremum of (1 - |z|^2) |f'(z)| over a polar n_grid x n_grid grid
    with radii up to ``grid_radius`` (angle 0 included), and the bound 2(1-beta).

    ``extremal="H10"`` uses f' = H_{1,0}; ``extremal="displayed"`` uses the
    derivative of beta z + ((1-beta)/2) log((1+z)/(1-z)).
    """
    if not (0 <= beta < 0.5):
        raise InvalidParams(f"beta must lie in [0, 1/2), got {beta}")
    if not (0 < grid_radius < 1):
        raise InvalidParams(f"grid_radius must lie in (0, 1), got {grid_radius}")
    fp = {"H10": _f_prime_H10, "displayed": _f_prime_displayed}[extremal]
    radii = grid_radius * np.arange(1, n_grid + 1) / n_grid
    angles = 2 * math.pi * np.arange(n_grid) / n_grid
    z = (radii[:, None] * np.exp(1j * angles)[None, :]).ravel()
    vals = (1 - np.abs(z) ** 2) * np.abs(fp(z, beta))
    return float(np.max(vals)), 2 * (1 - beta)


def vG_point_closed_form(theta, pf: SubclassParamsF):
    """(2beta - 1) z0 + ((1-beta) e^{-i theta/2} / sqrt(1-b^2)) [ ... ] for one or many angles."""
    _require_curve_domain(pf.lam, pf.z0)
    th = np.asarray(theta, dtype=float)
    half = np.exp(0.5j * th)
    lb = pf.lam.conjugate()
    b = (lb * half).imag
    s = np.sqrt(1 - b * b)
    bracket = ((1 + lb * half * (-s + 1j * b)) * np.log(1 + half * pf.z0 / (s - 1j * b))
               - (1 + lb * half * (s + 1j * b)) * np.log(1 - half * pf.z0 / (s + 1j * b)))
    value = (2 * pf.beta - 1) * pf.z0 + (1 - pf.beta) * np.conj(half) / s * bracket
    return complex(value) if value.ndim == 0 else value


def vG_boundary_closed_form(pf: SubclassParamsF, n: int = 720) -> BoundaryCurve:
    """Boundary of V_G; it does not depend on alpha."""
    if not (0 <= pf.beta < 1):
        raise InvalidParams("the V_G curve needs 0 <= beta < 1")
    if n < 16:
        raise InvalidParams(f"n must be >= 16, got {n}")
    thetas = theta_grid(n)
    return BoundaryCurve(pf, thetas, vG_point_closed_form(thetas, pf), Method.CLOSED_FORM)


def F_a0(z, a, pf: SubclassParamsF, cfg: QuadratureConfig = DEFAULT_QUAD) -> complex:
    """
    Extremal F_{a,0} solving F' + alpha z F'' = (1 + (1-2beta) a z^2)/(1 - a z^2).

    The t-integral is evaluated after t = u^2, which removes the square-root
    endpoint behaviour at t = 0.
    """
    z = as_cx(z, "z")
    a = as_cx(a, "a")
    if abs(z) >= 1 or abs(a) > 1:
        raise InvalidParams("F_a0 needs |z| < 1 and |a| <= 1")
    if z == 0 or a == 0:
        return z
    alpha = pf.alpha
    az2 = a * z * z
    if abs(alpha - 1) < ALPHA_ONE_TOL:
        def integrand(u):
            # t^{1/2} log(1/t) dt  ->  u * (-2 log u) * 2u du
            logu = np.log(np.where(u > 0, u, 1.0))
            return -4 * u * u * logu / (1 - u * u * az2)

        return z + (1 - pf.beta) * a * z**3 / 2 * integrate_interval(integrand, 0.0, 1.0, cfg)

    expo = 1 / alpha

    def integrand(u):
        # (t^{1/2} - t^{1/(2 alpha)}) dt  ->  (u - u^{1/alpha}) 2u du
        upow = np.where(u > 0, np.exp(expo * np.log(np.where(u > 0, u, 1.0))), 0.0)
        return 2 * u * (u - upow) / (1 - u * u * az2)

    return z + (1 - pf.beta) * a * z**3 / (1 - alpha) * integrate_interval(integrand, 0.0, 1.0, cfg)


def F_a0_series(z, a, pf: SubclassParamsF, terms: int = 400) -> complex:
    """Power series z + sum_n 2(1-beta) a^n z^{2n+1} / ((2n+1)(1+2n alpha))."""
    z = complex(z)
    a = complex(a)
    n = np.arange(1, terms + 1)
    coeff = 2 * (1 - pf.beta) / ((2 * n + 1) * (1 + 2 * n * pf.alpha))
    return z + complex(np.sum(coeff * (a * z * z) ** n * z))


def G_kernel(z, theta: float, pf: SubclassParamsF):
    """(1 + (1-2beta) w) / (1 - w) with w = delta(e^{i theta} z, lambda) z."""
    w = mobius_delta(cmath.exp(1j * theta) * np.asarray(z), pf.lam) * np.asarray(z)
    out = (1 + (1 - 2 * pf.beta) * w) / (1 - w)
    return complex(out) if np.ndim(out) == 0 else out


def vG_membership_bound(z, pf: SubclassParamsF) -> GrowthBound:
    """Disk that holds f'(z) + alpha z f''(z) for every f in G(lambda)."""
    z = as_cx(z, "z")
    if abs(z) >= 1:
        raise InvalidParams("|z| must be < 1")
    lam = pf.lam
    zb = z.conjugate()
    m2 = abs(z) ** 2
    den = (1 - m2) * (1 + m2 - 2 * (lam * z).real)
    k = 1 - 2 * pf.beta
    c = ((1 + k * lam * z) * (1 - lam.conjugate() * zb)
         + m2 * (zb - lam) * (lam.conjugate() + k * z)) / den
    r = 2 * (1 - pf.beta) * (1 - abs(lam) ** 2) * m2 / den
    return GrowthBound(complex(c), float(r))
