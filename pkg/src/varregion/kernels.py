"""
The class P_{gamma,beta}(lambda) and its extremal kernels.

A member P is written through its Schwarz function omega (omega(0) = 0,
|omega| < 1) as

    P = 1 + 2 (1 - beta) e^{-i gamma} cos(gamma) * omega / (1 - omega),

and fixing P'(0) pins omega'(0) = lambda.  Every such omega has the form
z * delta(g(z), lambda) with g a Schwarz function, and the extremal kernels
H_{a,lambda} come from g(z) = a z.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidParams, PoleAtInput
from .numerics import as_cx, central_derivative

UNIT_TOL = 1e-12


@dataclass(frozen=True)
class ClassParams:
    """Problem instance (gamma, beta, lambda, z0).  gamma is real, |gamma| < pi/2."""
    gamma: float
    beta: float
    lam: complex
    z0: complex

    def __post_init__(self):
        gamma = float(self.gamma)
        beta = float(self.beta)
        if not math.isfinite(gamma) or abs(gamma) >= math.pi / 2:
            raise InvalidParams(f"gamma must satisfy |gamma| < pi/2, got {self.gamma}")
        if not (math.isfinite(beta) and 0.0 <= beta < 1.0):
            raise InvalidParams(f"beta must satisfy 0 <= beta < 1, got {self.beta}")
        lam = as_cx(self.lam, "lambda")
        z0 = as_cx(self.z0, "z0")
        if abs(lam) > 1 + UNIT_TOL:
            raise InvalidParams(f"lambda must satisfy |lambda| <= 1, got {lam}")
        if abs(z0) >= 1:
            raise InvalidParams(f"z0 must satisfy |z0| < 1, got {z0}")
        object.__setattr__(self, "gamma", gamma)
        object.__setattr__(self, "beta", beta)
        object.__setattr__(self, "lam", lam)
        object.__setattr__(self, "z0", z0)

    @property
    def weight(self) -> complex:
        """2 (1 - beta) e^{-i gamma} cos(gamma), the factor in front of omega/(1 - omega)."""
        return 2 * (1 - self.beta) * cmath.exp(-1j * self.gamma) * math.cos(self.gamma)

    @property
    def unimodular(self) -> bool:
        return abs(abs(self.lam) - 1) <= UNIT_TOL

    @property
    def degenerate(self) -> bool:
        return self.z0 == 0 or self.unimodular

    def replace(self, **changes) -> "ClassParams":
        kw = dict(gamma=self.gamma, beta=self.beta, lam=self.lam, z0=self.z0)
        kw.update(changes)
        return ClassParams(**kw)

    def as_dict(self) -> dict:
        return {"gamma": self.gamma, "beta": self.beta,
                "lambda": [self.lam.real, self.lam.imag],
                "z0": [self.z0.real, self.z0.imag]}


def normalize_theta(theta: float) -> float:
    """Map an angle into (-pi, pi]."""
    t = math.remainder(float(theta), 2 * math.pi)
    return math.pi if t == -math.pi else t


@dataclass(frozen=True)
class ExtremalIndex:
    """Index a of H_{a,lambda}; boundary kernels have a = e^{i theta}."""
    a: complex

    def __post_init__(self):
        a = as_cx(self.a, "a")
        if abs(a) > 1 + UNIT_TOL:
            raise InvalidParams(f"extremal index must satisfy |a| <= 1, got {a}")
        object.__setattr__(self, "a", a)

    @classmethod
    def from_theta(cls, theta: float) -> "ExtremalIndex":
        return cls(cmath.exp(1j * normalize_theta(theta)))

    @property
    def theta(self) -> float:
        return normalize_theta(cmath.phase(self.a))


def _index_value(idx) -> complex:
    return idx.a if isinstance(idx, ExtremalIndex) else complex(idx)


@dataclass(frozen=True)
class SchwarzGenerator:
    """
    g(w) = c * w^k * prod_j (w - a_j) / (1 - conj(a_j) w), with w = inner(z)
    when an inner generator is given (else w = z).

    |c| <= 1, k >= 1 and |a_j| < 1 make g a Schwarz function by construction.
    """
    c: complex = 1.0
    k: int = 1
    zeros: tuple = field(default_factory=tuple)
    inner: "SchwarzGenerator | None" = None

    def __post_init__(self):
        c = as_cx(self.c, "c")
        if abs(c) > 1 + UNIT_TOL:
            raise InvalidParams(f"|c| must be <= 1, got {c}")
        if int(self.k) != self.k or self.k < 1:
            raise InvalidParams(f"k must be a positive integer, got {self.k}")
        zeros = tuple(as_cx(a, "zero") for a in self.zeros)
        if any(abs(a) >= 1 for a in zeros):
            raise InvalidParams("Blaschke zeros must lie in the open unit disk")
        object.__setattr__(self, "c", c)
        object.__setattr__(self, "k", int(self.k))
        object.__setattr__(self, "zeros", zeros)

    @classmethod
    def zero(cls) -> "SchwarzGenerator":
        return cls(c=0.0)

    def __call__(self, z):
        w = self.inner(z) if self.inner is not None else z
        out = self.c * w**self.k
        for a in self.zeros:
            out = out * (w - a) / (1 - a.conjugate() * w)
        return out

    def derivative_at_zero(self) -> complex:
        if self.k > 1 or self.c == 0:
            return 0j
        d = self.c
        for a in self.zeros:
            d *= -a
        if self.inner is not None:
            d *= self.inner.derivative_at_zero()
        return complex(d)

    def describe(self) -> dict:
        out = {"c": [self.c.real, self.c.imag], "k": self.k,
               "zeros": [[a.real, a.imag] for a in self.zeros]}
        if self.inner is not None:
            out["inner"] = self.inner.describe()
        return out


def mobius_delta(z, lam):
    """delta(z, lambda) = (z + lambda) / (1 + conj(lambda) z)."""
    lam = complex(lam)
    den = 1 + lam.conjugate() * np.asarray(z)
    if np.any(np.abs(den) < 1e-15):
        raise PoleAtInput(f"1 + conj(lambda) z vanishes for lambda={lam}")
    out = (z + lam) / den
    return complex(out) if np.ndim(out) == 0 else out


def P_from_omega(z, omega_value, p: ClassParams):
    """The member value 1 + weight * omega/(1 - omega) belonging to omega."""
    w = omega_value
    out = 1 + p.weight * w / (1 - w)
    return complex(out) if np.ndim(out) == 0 else out


def extremal_H(z, idx, p: ClassParams):
    """H_{a,lambda}(z) = P_from_omega(z, z * delta(a z, lambda))."""
    a = _index_value(idx)
    z_arr = np.asarray(z)
    return P_from_omega(z, z_arr * mobius_delta(a * z_arr, p.lam), p)


def sample_member(gen: SchwarzGenerator, p: ClassParams):
    """Return the member z -> P(z) whose Schwarz function is z * delta(g(z), lambda)."""
    def member(z):
        z_arr = np.asarray(z)
        return P_from_omega(z, z_arr * mobius_delta(gen(z_arr), p.lam), p)
    return member


def expected_second_coefficient(a: complex, p: ClassParams) -> complex:
    """P''(0) = 2 weight [(1 - |lambda|^2) a + lambda^2] for g'(0) = a."""
    lam = p.lam
    return 2 * p.weight * ((1 - abs(lam) ** 2) * a + lam * lam)


def check_second_coefficient(gen: SchwarzGenerator, p: ClassParams, h: float = 1e-4) -> float:
    """|finite-difference P''(0) - 4(1-beta)[(1-|lambda|^2) g'(0) + lambda^2] e^{-i gamma} cos(gamma)|."""
    member = sample_member(gen, p)
    fd = central_derivative(member, 0j, order=2, h=h)
    return abs(fd - expected_second_coefficient(gen.derivative_at_zero(), p))


def random_generator(rng: np.random.Generator, max_zeros: int = 3) -> SchwarzGenerator:
    """Draw a Schwarz generator: a monomial, a Blaschke product, or one composed with a monomial."""
    def disk_point(radius):
        return radius * math.sqrt(rng.random()) * cmath.exp(2j * math.pi * rng.random())

    kind = int(rng.integers(0, 3))
    if kind == 0:
        return SchwarzGenerator(c=disk_point(1.0), k=int(rng.integers(1, 5)))
    n_zeros = int(rng.integers(0, max_zeros + 1))
    zeros = tuple(disk_point(0.9) for _ in range(n_zeros))
    rot = cmath.exp(2j * math.pi * rng.random())
    blaschke = SchwarzGenerator(c=rot, k=1, zeros=zeros)
    if kind == 1:
        return blaschke
    inner = SchwarzGenerator(c=disk_point(1.0), k=int(rng.integers(1, 3)))
    return SchwarzGenerator(c=rot, k=1, zeros=zeros, inner=inner)
