"""
End-to-end acceptance checks.  Each test covers one criterion and reports a
PASS/FAIL line (shown in the terminal summary).
"""

import cmath
import math
import time

import numpy as np
import pytest

from varregion import cli
from varregion.bounds import enclosure_disk, growth_bound, growth_bound_lambda0, lemma_G, lemma_G0_starlike_check
from varregion.kernels import ClassParams, extremal_H, random_generator, sample_member
from varregion.numerics import central_derivative, point_in_polygon, polygon_is_convex, polygon_is_simple
from varregion.regions import (Method, boundary_curve, boundary_point_closed_form, boundary_point_quadrature,
                               degenerate_point, interior_center, theta_grid)
from varregion.subclasses import (F_a0, SubclassParamsF, SubclassParamsR, rbeta_sup_bound_check,
                                  vG_boundary_closed_form, vR_boundary)
from varregion.verify import ParamBox, containment_trial, sample_params, trial_rng

FIGURE_SETS = [ClassParams(gamma, beta, lam, z0) for z0, lam, beta, gamma in cli.FIGURE_PARAMS]


def random_sets(label: str, count: int):
    return [sample_params(trial_rng(42, label, i), ParamBox()) for i in range(count)]


def disk_point(rng, radius):
    return radius * math.sqrt(rng.random()) * cmath.exp(2j * math.pi * rng.random())


@pytest.fixture(scope="module")
def fifty_sets():
    return random_sets("acceptance.random_sets", 50)


def test_c01_dual_route(criterion):
    with criterion("1", "closed form vs quadrature on the five reference sets, 64 angles, <= 1e-9, <= 5 s"):
        start = time.perf_counter()
        th = theta_grid(64)
        worst = 0.0
        for p in FIGURE_SETS:
            closed = boundary_point_closed_form(th, p)
            quad = np.array([boundary_point_quadrature(t, p) for t in th])
            worst = max(worst, float(np.max(np.abs(closed - quad))))
        elapsed = time.perf_counter() - start
        assert worst <= 1e-9
        assert elapsed <= 5.0


def test_c02_convex_simple(criterion, fifty_sets):
    with criterion("2", "50 seeded 720-sample boundaries are convex and simple, <= 30 s"):
        start = time.perf_counter()
        for p in fifty_sets:
            poly = boundary_curve(p, 720).polygon()
            assert polygon_is_convex(poly), p
            assert polygon_is_simple(poly), p
        assert time.perf_counter() - start <= 30.0


def test_c03_interior_point(criterion, fifty_sets):
    with criterion("3", "interior center strictly inside; lambda = 0 returns z0 exactly"):
        for p in fifty_sets:
            assert point_in_polygon(boundary_curve(p, 720).polygon(), interior_center(p)) > 0, p
        for p in fifty_sets[:10]:
            q = p.replace(lam=0)
            assert interior_center(q) == q.z0


def test_c04_degenerate_collapse(criterion):
    with criterion("4", "|lambda| = 1: kernel integrals at 8 angles equal the single point within 1e-9"):
        rng = np.random.default_rng(4)
        cases = [ClassParams(0.0, 0.0, 1.0, 0.5)]
        for _ in range(10):
            cases.append(ClassParams(rng.uniform(-1.5, 1.5), rng.uniform(0, 0.98),
                                     cmath.exp(2j * math.pi * rng.random()), disk_point(rng, 0.95)))
        for p in cases:
            value = degenerate_point(p)
            for theta in np.linspace(-math.pi, math.pi, 8, endpoint=False) + 0.1:
                assert abs(boundary_point_quadrature(theta, p) - value) <= 1e-9
        assert abs(degenerate_point(cases[0]) - 0.8862943611) < 1e-10
        assert abs(degenerate_point(cases[0]) - (-0.5 + 2 * math.log(2))) < 1e-15


def test_c05_growth_equality(criterion):
    with criterion("5", "kernels lie on the growth circle (1e-9); members inside it (+1e-10)"):
        rng = np.random.default_rng(5)
        for _ in range(200):
            p = ClassParams(rng.uniform(-1.5, 1.5), rng.uniform(0, 0.98), disk_point(rng, 0.95), 0.5)
            z = disk_point(rng, 0.95)
            theta = rng.uniform(-math.pi, math.pi)
            gb = growth_bound(z, p)
            assert abs(abs(extremal_H(z, cmath.exp(1j * theta), p) - gb.c) - gb.r) <= 1e-9
        for _ in range(200):
            p = ClassParams(rng.uniform(-1.5, 1.5), rng.uniform(0, 0.98), disk_point(rng, 0.95), 0.5)
            z = disk_point(rng, 0.95)
            gb = growth_bound(z, p)
            assert abs(sample_member(random_generator(rng), p)(z) - gb.c) <= gb.r + 1e-10


def test_c06_lambda0_specialisation(criterion):
    with criterion("6", "lambda = 0, gamma = 0 growth disk matches the |z|^4 formulas (1e-12); spot value"):
        rng = np.random.default_rng(6)
        for _ in range(100):
            z = disk_point(rng, 0.99)
            p = ClassParams(0.0, rng.uniform(0, 0.99), 0.0, 0.5)
            m4 = abs(z) ** 4
            c = (1 + (1 - 2 * p.beta) * m4) / (1 - m4)
            r = 2 * (1 - p.beta) * abs(z) ** 2 / (1 - m4)
            gb = growth_bound(z, p)
            assert abs(gb.c - c) <= 1e-12 and abs(gb.r - r) <= 1e-12
            alt = growth_bound_lambda0(z, p)
            assert abs(alt.c - c) <= 1e-12 and abs(alt.r - r) <= 1e-12
        gb = growth_bound(0.5, ClassParams(0.0, 0.0, 0.0, 0.5))
        assert abs(gb.c - 1.1333333333) < 1e-10 and abs(gb.r - 0.5333333333) < 1e-10


def test_c07_enclosure(criterion):
    with criterion("7", "boundary samples inside the segment enclosure disk (+1e-9)"):
        for p in FIGURE_SETS + random_sets("acceptance.enclosure", 20):
            disk = enclosure_disk(p)
            pts = boundary_curve(p, 720).points
            assert float(np.max(np.abs(pts - disk.center))) <= disk.radius + 1e-9, p


@pytest.mark.xfail(strict=True, reason=(
    "not attainable: 3e^{-i theta}G(z)/z^3 = 1 - (3/2)(conj(lambda)e^{i theta} - lambda) z + O(z^2), "
    "so at |z| = 1e-3 the deviation is ~1.5e-3 |conj(lambda)e^{i theta} - lambda|, above 1e-4 "
    "for most random lambda"))
def test_c08a_G_third_order_zero(criterion):
    with criterion("8a", "|3e^{-i theta}G(z)/z^3 - 1| < 1e-4 at |z| = 1e-3 for 20 random (theta, lambda)"):
        rng = np.random.default_rng(8)
        worst = 0.0
        for _ in range(20):
            theta = rng.uniform(-math.pi, math.pi)
            lam = disk_point(rng, 0.95)
            z = 1e-3 * cmath.exp(2j * math.pi * rng.random())
            q = 3 * cmath.exp(-1j * theta) * lemma_G(z, theta, lam) / z**3
            worst = max(worst, abs(q - 1))
        assert worst < 1e-4, f"worst deviation {worst:.3e}"


def test_c08b_G0_starlike(criterion):
    with criterion("8b", "G0 starlikeness margin > 0 on 64-point grids for 10 random (theta, lambda)"):
        rng = np.random.default_rng(80)
        grid = [r * cmath.exp(2j * math.pi * (k + 0.5) / 8) for r in np.linspace(0.1, 0.9, 8) for k in range(8)]
        for _ in range(10):
            theta = rng.uniform(-math.pi, math.pi)
            lam = disk_point(rng, 0.95)
            assert lemma_G0_starlike_check(theta, lam, grid) > 0, (theta, lam)


def test_c09_subclass_coherence(criterion):
    with criterion("9", "V_R, V_G equal the gamma = 0 region (1e-10); F ODE residual < 1e-6; f'''(0) within 1e-5"):
        for p in random_sets("acceptance.subclasses", 10):
            ref = boundary_curve(p.replace(gamma=0.0), 64).points
            vr = vR_boundary(SubclassParamsR(p.beta, p.lam, p.z0), 64).points
            vg = vG_boundary_closed_form(SubclassParamsF(1.3 - 0.4j, p.beta, p.lam, p.z0), 64).points
            assert float(np.max(np.abs(vr - ref))) <= 1e-10
            assert float(np.max(np.abs(vg - ref))) <= 1e-10

        rng = np.random.default_rng(9)
        for _ in range(10):
            pf = SubclassParamsF(complex(rng.uniform(0.2, 3), rng.uniform(-1, 1)), rng.uniform(0, 0.98), 0, 0.5)
            a = cmath.exp(2j * math.pi * rng.random())
            z = disk_point(rng, 0.8)
            F = lambda w: F_a0(w, a, pf)
            d1 = central_derivative(F, z, 1, h=1e-3)
            d2 = central_derivative(F, z, 2, h=1e-3)
            kernel = (1 + (1 - 2 * pf.beta) * a * z * z) / (1 - a * z * z)
            assert abs(d1 + pf.alpha * z * d2 - kernel) < 1e-6
            d3 = central_derivative(F, 0j, 3, h=1e-2)
            assert abs(d3 - 4 * a * (1 - pf.beta) / (1 + 2 * pf.alpha)) <= 1e-5


def test_c10_sup_bound(criterion):
    with criterion("10", "grid sup of (1-|z|^2)|f'| within [0.99, 1] * 2(1-beta) at radius 0.999"):
        for beta in (0.0, 0.25, 0.49):
            sup, bound = rbeta_sup_bound_check(beta, 0.999, 400)
            assert sup <= bound + 1e-12
            assert sup >= 0.99 * bound


def test_c11_containment(criterion):
    with criterion("11", "200 members per reference set land within one vertex gap of the region"):
        for row, p in enumerate(FIGURE_SETS):
            curve = boundary_curve(p, 720)
            gap = curve.max_gap()
            rng = trial_rng(42, "acceptance.containment", row)
            worst = min(containment_trial(p, random_generator(rng), curve) for _ in range(200))
            assert worst >= -gap, (row + 1, worst, gap)


def test_c12_determinism(criterion, capsys):
    with criterion("12", "verify --seed 42 --trials 50: exit 0, byte-identical, thread-count independent"):
        outputs = []
        for threads in ("1", "4", "4"):
            code = cli.main(["verify", "--seed", "42", "--trials", "50", "--threads", threads])
            outputs.append(capsys.readouterr().out)
            assert code == 0, outputs[-1]
        assert outputs[0] == outputs[1] == outputs[2]
        assert outputs[0].rstrip().endswith("ALL PASS")
