"""
Complex helpers, adaptive segment quadrature and tolerance-based planar geometry.

Complex numbers are plain Python ``complex`` (or numpy complex arrays for
vectorised evaluation).  Integrands handed to :func:`integrate_segment` must
accept a 1-D complex array and return values of the same shape (a scalar is
broadcast).
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .errors import InvalidParams, NonConvergence

ComplexFn = Callable[[np.ndarray], np.ndarray]


def as_cx(value, name: str = "value") -> complex:
    """Coerce to a finite Python complex, rejecting NaN/Inf."""
    try:
        z = complex(value)
    except (TypeError, ValueError) as exc:
        raise InvalidParams(f"{name} is not a complex number: {value!r}") from exc
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise InvalidParams(f"{name} must be finite, got {z!r}")
    return z


# ---------------------------------------------------------------------------
# Quadrature
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class QuadratureConfig:
    abs_tol: float = 1e-12
    rel_tol: float = 1e-12
    max_subdivisions: int = 2**16

    def __post_init__(self):
        if not (self.abs_tol >= 1e-15 and math.isfinite(self.abs_tol)):
            raise InvalidParams(f"abs_tol must be >= 1e-15, got {self.abs_tol}")
        if not (self.rel_tol > 0 and math.isfinite(self.rel_tol)):
            raise InvalidParams(f"rel_tol must be > 0, got {self.rel_tol}")
        if int(self.max_subdivisions) != self.max_subdivisions or self.max_subdivisions < 8:
            raise InvalidParams(f"max_subdivisions must be an integer >= 8, got {self.max_subdivisions}")


DEFAULT_QUAD = QuadratureConfig()

# 15-point Kronrod extension of the 7-point Gauss rule on [-1, 1].
_XK = np.array([
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
])
_WK = np.array([
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
])
_WG = np.array([
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
])

_NODES = np.concatenate([-_XK[:-1], _XK[::-1]])
_KW = np.concatenate([_WK[:-1], _WK[::-1]])
_GW = np.zeros(15)
_GW[[1, 3, 5]] = _WG[:3]
_GW[[13, 11, 9]] = _WG[:3]
_GW[7] = _WG[3]


def _gk15(f: ComplexFn, a: complex, b: complex, lo: float, hi: float):
    # Segment parameterised as a + t (b - a), t in [lo, hi].
    half = 0.5 * (hi - lo)
    t = 0.5 * (hi + lo) + half * _NODES
    zeta = a + t * (b - a)
    vals = np.broadcast_to(np.asarray(f(zeta), dtype=complex), zeta.shape)
    scale = half * (b - a)
    kron = complex(scale * np.dot(_KW, vals))
    gauss = complex(scale * np.dot(_GW, vals))
    return kron, abs(kron - gauss)


def integrate_segment(f: ComplexFn, a, b, cfg: QuadratureConfig = DEFAULT_QUAD) -> complex:
    """
    Integrate ``f`` along the straight segment from ``a`` to ``b`` in the complex plane.

    Globally adaptive Gauss-Kronrod (7/15): the interval with the largest
    error estimate |K15 - G7| is bisected until the summed estimate drops to
    ``max(abs_tol, rel_tol * |result|)``.  Raises NonConvergence once
    ``cfg.max_subdivisions`` bisections have been spent.
    """
    a = as_cx(a, "a")
    b = as_cx(b, "b")
    if a == b:
        return 0j

    val, err = _gk15(f, a, b, 0.0, 1.0)
    if not (math.isfinite(val.real) and math.isfinite(val.imag)):
        raise NonConvergence(f"non-finite integrand on segment [{a}, {b}]")
    # heap entries: (-err, seq, lo, hi, val, err); seq keeps ordering deterministic
    heap = [(-err, 0, 0.0, 1.0, val, err)]
    pieces = {0: (val, err)}
    run_val, run_err = val, err
    seq = 1
    splits = 0
    while True:
        # running sums pick the moment to stop; exact sums confirm it
        if run_err <= max(cfg.abs_tol, cfg.rel_tol * abs(run_val)) or splits >= cfg.max_subdivisions:
            total = sum(v for v, _ in pieces.values())
            total_err = math.fsum(e for _, e in pieces.values())
            run_val, run_err = total, total_err
            if total_err <= max(cfg.abs_tol, cfg.rel_tol * abs(total)):
                return complex(total)
            if splits >= cfg.max_subdivisions:
                raise NonConvergence(
                    f"quadrature on [{a}, {b}] stalled at error {total_err:.3e} "
                    f"after {splits} subdivisions"
                )
        _, key, lo, hi, v_old, e_old = heapq.heappop(heap)
        del pieces[key]
        run_val -= v_old
        run_err -= e_old
        mid = 0.5 * (lo + hi)
        if not (lo < mid < hi):
            raise NonConvergence(f"quadrature on [{a}, {b}] cannot refine below machine resolution")
        for l, h in ((lo, mid), (mid, hi)):
            v, e = _gk15(f, a, b, l, h)
            if not (math.isfinite(v.real) and math.isfinite(v.imag)):
                raise NonConvergence(f"non-finite integrand on segment [{a}, {b}]")
            heapq.heappush(heap, (-e, seq, l, h, v, e))
            pieces[seq] = (v, e)
            run_val += v
            run_err += e
            seq += 1
        splits += 1


def integrate_interval(f: Callable[[np.ndarray], np.ndarray], lo: float, hi: float,
                       cfg: QuadratureConfig = DEFAULT_QUAD) -> complex:
    """Integrate a complex-valued function of a real variable over [lo, hi]."""
    return integrate_segment(lambda t: f(t.real), lo, hi, cfg)


def central_derivative(f: Callable, z: complex, order: int = 1, h: float = 1e-4) -> complex:
    """
    Central finite-difference derivative of order 1, 2 or 3 along the real
    direction, Richardson-extrapolated once (steps h and h/2).
    """
    def stencil(step):
        if order == 1:
            return (f(z + step) - f(z - step)) / (2 * step)
        if order == 2:
            return (f(z + step) - 2 * f(z) + f(z - step)) / step**2
        if order == 3:
            return (f(z + 2 * step) - 2 * f(z + step) + 2 * f(z - step) - f(z - 2 * step)) / (2 * step**3)
        raise ValueError(f"unsupported derivative order {order}")

    coarse = stencil(h)
    fine = stencil(h / 2)
    return complex((4 * fine - coarse) / 3)


# ---------------------------------------------------------------------------
# Planar geometry
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class Polygon:
    """Closed polygon; the last vertex connects back to the first."""
    vertices: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.vertices, dtype=complex).ravel()
        if v.size < 3:
            raise InvalidParams("a polygon needs at least 3 vertices")
        if not np.all(np.isfinite(v)):
            raise InvalidParams("polygon vertices must be finite")
        if np.any(np.abs(np.roll(v, -1) - v) <= 1e-14):
            raise InvalidParams("polygon has a repeated consecutive vertex")
        v.setflags(write=False)
        object.__setattr__(self, "vertices", v)

    def __len__(self):
        return self.vertices.size

    @property
    def edges(self) -> np.ndarray:
        return np.roll(self.vertices, -1) - self.vertices

    def diameter(self) -> float:
        v = self.vertices
        return float(np.max(np.abs(v[:, None] - v[None, :])))

    def signed_area(self) -> float:
        v = self.vertices
        w = np.roll(v, -1)
        return 0.5 * float(np.sum(v.real * w.imag - w.real * v.imag))

    def max_edge(self) -> float:
        return float(np.max(np.abs(self.edges)))


def is_point_region(points: Sequence[complex], tol: float = 1e-12) -> bool:
    """True when every point lies within ``tol`` of the first one."""
    pts = np.asarray(points, dtype=complex).ravel()
    return bool(pts.size > 0 and np.all(np.abs(pts - pts[0]) <= tol))


def _cross(u, v):
    return u.real * v.imag - u.imag * v.real


def polygon_is_convex(p: Polygon, tol: float | None = None) -> bool:
    """
    Convexity test: consecutive edge cross products share one sign, with
    ``|cross| <= tol`` accepted as collinear; the boundary must also turn
    exactly once around (rules out star-shaped self-overlapping loops).
    Cross products scale with length squared, so the default ``tol`` is
    ``1e-10 * diameter**2``.
    """
    if tol is None:
        tol = 1e-10 * p.diameter() ** 2
    e = p.edges
    e_next = np.roll(e, -1)
    cross = _cross(e, e_next)
    significant = cross[np.abs(cross) > tol]
    if significant.size == 0:
        return False
    if not (np.all(significant > 0) or np.all(significant < 0)):
        return False
    turning = float(np.sum(np.angle(e_next / e)))
    return abs(abs(turning) - 2 * math.pi) < 1e-6


def _point_segment_distance(w, a, b):
    ab = b - a
    denom = np.abs(ab) ** 2
    t = np.clip(((w - a) * np.conj(ab)).real / np.where(denom > 0, denom, 1.0), 0.0, 1.0)
    return np.abs(w - (a + t * ab))


def polygon_is_simple(p: Polygon, tol: float | None = None) -> bool:
    """
    True iff no two non-adjacent edges intersect or come within ``tol`` of
    each other.  Brute-force pairwise test vectorised over edges; default
    ``tol`` is ``1e-12 * diameter``.
    """
    if tol is None:
        tol = 1e-12 * p.diameter()
    v = p.vertices
    n = v.size
    a = v
    b = np.roll(v, -1)
    for i in range(n - 2):
        j = np.arange(i + 2, n)
        if i == 0:
            j = j[j != n - 1]
        if j.size == 0:
            continue
        c, d = a[j], b[j]
        d1 = _cross(b[i] - a[i], c - a[i])
        d2 = _cross(b[i] - a[i], d - a[i])
        d3 = _cross(d - c, a[i] - c)
        d4 = _cross(d - c, b[i] - c)
        proper = (d1 * d2 < 0) & (d3 * d4 < 0)
        if np.any(proper):
            return False
        dist = np.minimum.reduce([
            _point_segment_distance(a[i], c, d),
            _point_segment_distance(b[i], c, d),
            _point_segment_distance(c, a[i], b[i]),
            _point_segment_distance(d, a[i], b[i]),
        ])
        if np.any(dist <= tol):
            return False
    return True


def winding_number(p: Polygon, w: complex) -> int:
    rel = p.vertices - w
    if np.any(rel == 0):
        return 0
    return int(round(float(np.sum(np.angle(np.roll(rel, -1) / rel))) / (2 * math.pi)))


def point_in_polygon(p: Polygon, w) -> float:
    """
    Signed distance from ``w`` to the polygon boundary: positive inside,
    negative outside.  Inside means nonzero winding number, so the sign does
    not depend on vertex orientation.
    """
    w = as_cx(w, "w")
    a = p.vertices
    b = np.roll(a, -1)
    dist = float(np.min(_point_segment_distance(w, a, b)))
    if dist == 0.0:
        return 0.0
    return dist if winding_number(p, w) != 0 else -dist


def convex_hull(points: Sequence[complex]) -> Polygon:
    """Counter-clockwise convex hull (Andrew's monotone chain)."""
    pts = sorted(set(complex(z) for z in np.asarray(points, dtype=complex).ravel()),
                 key=lambda z: (z.real, z.imag))
    if len(pts) < 3:
        raise InvalidParams("convex hull needs at least 3 distinct points")

    def half(seq):
        out: list[complex] = []
        for z in seq:
            while len(out) >= 2 and _cross(out[-1] - out[-2], z - out[-2]) <= 0:
                out.pop()
            out.append(z)
        return out

    lower = half(pts)
    upper = half(reversed(pts))
    return Polygon(np.array(lower[:-1] + upper[:-1]))
