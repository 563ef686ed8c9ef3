import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from varregion.errors import InvalidParams, NonConvergence
from varregion.numerics import (Polygon, QuadratureConfig, as_cx, central_derivative, convex_hull,
                                integrate_interval, integrate_segment, is_point_region,
                                point_in_polygon, polygon_is_convex, polygon_is_simple,
                                winding_number)


def regular_polygon(n, radius=1.0, center=0j):
    return Polygon(center + radius * np.exp(2j * np.pi * np.arange(n) / n))


def test_as_cx_rejects_nonfinite():
    assert as_cx(1.5) == 1.5 + 0j
    with pytest.raises(InvalidParams):
        as_cx(float("nan"))
    with pytest.raises(InvalidParams):
        as_cx("abc")


def test_polynomial_integral_exact():
    b = 0.6 + 0.7j
    got = integrate_segment(lambda z: z**2, 0, b)
    assert abs(got - b**3 / 3) < 1e-15


def test_log_integral():
    # int_0^z 1/(1 - s) ds = -log(1 - z)
    z = 0.9 * cmath.exp(0.4j)
    got = integrate_segment(lambda s: 1 / (1 - s), 0, z)
    assert abs(got + cmath.log(1 - z)) < 1e-13


def test_endpoint_singularity_converges():
    # int_0^1 log(t) dt = -1
    got = integrate_interval(lambda t: np.log(np.where(t > 0, t, 1.0)), 0.0, 1.0)
    assert abs(got + 1) < 1e-11


def test_empty_segment():
    assert integrate_segment(lambda z: 1 / z, 0.3, 0.3) == 0


def test_budget_exhaustion_raises():
    cfg = QuadratureConfig(abs_tol=1e-15, rel_tol=1e-15, max_subdivisions=8)
    with pytest.raises(NonConvergence):
        integrate_segment(lambda z: np.abs(z.real - 0.3) ** 0.1, 0, 1, cfg)


def test_pole_on_path_raises():
    with np.errstate(all="ignore"), pytest.raises(NonConvergence):
        integrate_segment(lambda z: 1 / z, 0, 1)


@pytest.mark.parametrize("kw", [{"abs_tol": 1e-16}, {"rel_tol": 0.0}, {"max_subdivisions": 4}])
def test_config_validation(kw):
    with pytest.raises(InvalidParams):
        QuadratureConfig(**kw)


@pytest.mark.parametrize("order,expected", [(1, 3 * 0.4**2), (2, 6 * 0.4), (3, 6.0)])
def test_central_derivative(order, expected):
    assert abs(central_derivative(lambda z: z**3, 0.4, order=order, h=1e-3) - expected) < 1e-8


def test_polygon_validation():
    with pytest.raises(InvalidParams):
        Polygon([0, 1])
    with pytest.raises(InvalidParams):
        Polygon([0, 1, 1, 1j])


def test_square_geometry():
    sq = Polygon([0, 1, 1 + 1j, 1j])
    assert polygon_is_convex(sq) and polygon_is_simple(sq)
    assert sq.signed_area() == pytest.approx(1.0)
    assert sq.diameter() == pytest.approx(math.sqrt(2))
    assert point_in_polygon(sq, 0.5 + 0.5j) == pytest.approx(0.5)
    assert point_in_polygon(sq, 2 + 0.5j) == pytest.approx(-1.0)
    assert winding_number(sq, 0.5 + 0.5j) == 1
    assert winding_number(sq, 3j) == 0


def test_bowtie_not_simple():
    bow = Polygon([0, 1 + 1j, 1, 1j])
    assert not polygon_is_simple(bow)
    assert not polygon_is_convex(bow)


def test_nonconvex_star():
    pts = [cmath.rect(1.0 if k % 2 == 0 else 0.4, math.pi * k / 5) for k in range(10)]
    star = Polygon(pts)
    assert polygon_is_simple(star)
    assert not polygon_is_convex(star)


def test_double_wound_polygon_not_convex():
    pentagram = Polygon([cmath.exp(2j * math.pi * 2 * k / 5) for k in range(5)])
    assert not polygon_is_convex(pentagram)


@pytest.mark.parametrize("scale", [1e-6, 1e-4, 1.0, 1e3])
def test_convexity_is_scale_invariant(scale):
    # a tiny region must be judged exactly like a unit one
    poly = regular_polygon(720, radius=scale, center=0.3 + 0.1j)
    assert polygon_is_convex(poly)
    assert polygon_is_simple(poly)


def test_collinear_vertices_tolerated():
    poly = Polygon([0, 0.5, 1, 1 + 1j, 1j])
    assert polygon_is_convex(poly)


def test_orientation_does_not_matter():
    poly = regular_polygon(12)
    rev = Polygon(poly.vertices[::-1])
    assert polygon_is_convex(rev)
    w = 0.2 - 0.3j
    assert point_in_polygon(rev, w) == pytest.approx(point_in_polygon(poly, w), abs=1e-15)


def test_is_point_region():
    assert is_point_region([0.5, 0.5 + 1e-14, 0.5])
    assert not is_point_region([0.5, 0.6])


@settings(max_examples=40, deadline=None)
@given(st.lists(st.tuples(st.floats(-5, 5), st.floats(-5, 5)), min_size=4, max_size=40))
def test_convex_hull_is_convex_and_contains_input(raw):
    pts = np.array([complex(x, y) for x, y in raw])
    try:
        hull = convex_hull(pts)
    except InvalidParams:
        return  # fewer than three non-collinear points
    assert polygon_is_convex(hull)
    assert hull.signed_area() > 0
    tol = 1e-9 * max(1.0, hull.diameter())
    assert all(point_in_polygon(hull, w) >= -tol for w in pts)


@settings(max_examples=30, deadline=None)
@given(st.floats(-0.9, 0.9), st.floats(-0.9, 0.9), st.floats(0.0, 1.0))
def test_path_additivity(x, y, t):
    c = complex(x, y) * 0.7
    b = t * c
    f = lambda z: np.exp(z) / (2 - z)
    total = integrate_segment(f, 0, b) + integrate_segment(f, b, c)
    assert abs(total - integrate_segment(f, 0, c)) < 1e-12
