"""
Seeded property campaigns.

Every property runs ``trials`` independent trials.  Trial ``t`` of property
``name`` draws from its own numpy PCG64 stream seeded with
``SeedSequence(seed, spawn_key=(crc32(name), t))``, so a trial can be
replayed in isolation and the outcome does not depend on execution order or
thread count.  A trial yields a margin; it passes when the margin is >= 0
(> 0 for properties marked strict).
"""

from __future__ import annotations

import cmath
import math
import zlib
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import __version__
from . import documents
from .bounds import enclosure_disk, growth_bound, mobius_triple
from .errors import InvalidParams, VarRegionError
from .kernels import (ClassParams, SchwarzGenerator, extremal_H, mobius_delta,
                      random_generator, sample_member)
from .numerics import (DEFAULT_QUAD, Polygon, QuadratureConfig, central_derivative, convex_hull,
                       integrate_segment, point_in_polygon, polygon_is_convex, polygon_is_simple)
from .regions import (BoundaryCurve, Method, boundary_curve, boundary_point_closed_form,
                      boundary_point_quadrature, interior_center, theta_grid)
from .subclasses import (F_a0, SubclassParamsF, SubclassParamsR, rbeta_sup_bound_check,
                         vG_point_closed_form, vR_point)


@dataclass(frozen=True)
class ParamBox:
    gamma_max: float = math.pi / 2 - 0.05
    beta_min: float = 0.0
    beta_max: float = 0.98
    lam_max: float = 0.95
    z0_min: float = 0.05
    z0_max: float = 0.95

    def __post_init__(self):
        if not (0 <= self.gamma_max < math.pi / 2):
            raise InvalidParams("gamma_max must lie in [0, pi/2)")
        if not (0 <= self.beta_min <= self.beta_max < 1):
            raise InvalidParams("beta range must lie in [0, 1)")
        if not (0 <= self.lam_max < 1):
            raise InvalidParams("lam_max must lie in [0, 1)")
        if not (0 < self.z0_min <= self.z0_max < 1):
            raise InvalidParams("z0 range must lie in (0, 1)")


DEFAULT_TOLERANCES = {
    "quadrature": 1e-11,      # 10 * abs_tol
    "dual_route": 1e-9,
    "normalization": 1e-7,
    "collapse": 1e-14,
    "involution": 1e-14,
    "membership": 1e-10,
    "identity": 1e-12,
    "enclosure": 1e-9,
    "coherence": 1e-10,
    "second_derivative": 1e-6,
    "third_derivative": 1e-5,
}


@dataclass(frozen=True)
class CampaignConfig:
    seed: int = 42
    trials: int = 50
    param_box: ParamBox = field(default_factory=ParamBox)
    n_curve_samples: int = 720
    members_per_trial: int = 4
    tolerances: dict = field(default_factory=lambda: dict(DEFAULT_TOLERANCES))
    quad: QuadratureConfig = DEFAULT_QUAD

    def __post_init__(self):
        if int(self.seed) != self.seed or self.seed < 0:
            raise InvalidParams(f"seed must be a non-negative integer, got {self.seed}")
        if int(self.trials) != self.trials or self.trials < 1:
            raise InvalidParams(f"trials must be >= 1, got {self.trials}")
        if self.n_curve_samples < 16:
            raise InvalidParams("n_curve_samples must be >= 16")
        if self.members_per_trial < 1:
            raise InvalidParams("members_per_trial must be >= 1")
        tol = dict(DEFAULT_TOLERANCES)
        tol.update(self.tolerances)
        object.__setattr__(self, "tolerances", tol)

    def tol(self, key: str) -> float:
        return self.tolerances[key]


@dataclass(frozen=True)
class Outcome:
    margin: float
    params: dict


@dataclass
class PropertyResult:
    name: str
    passed: int = 0
    failed: int = 0
    worst_margin: float = math.inf
    failures: list = field(default_factory=list)


@dataclass
class CampaignReport:
    seed: int
    trials: int
    results: list

    @property
    def all_passed(self) -> bool:
        return all(r.failed == 0 for r in self.results)

    def to_dict(self) -> dict:
        num = lambda x: x if math.isfinite(x) else repr(x)
        return {
            "meta": {"kind": "report", "tool": "varregion", "version": __version__,
                     "seed": self.seed, "trials": self.trials, "all_passed": self.all_passed},
            "properties": [
                {"name": r.name, "passed": r.passed, "failed": r.failed,
                 "worst_margin": num(r.worst_margin),
                 "failures": [dict(f, margin=num(f["margin"])) for f in r.failures]}
                for r in self.results
            ],
        }

    def to_json(self) -> str:
        return documents.dumps_json(self.to_dict())

    def to_text(self) -> str:
        lines = [f"varregion {__version__} campaign seed={self.seed} trials={self.trials}"]
        for r in self.results:
            status = "PASS" if r.failed == 0 else "FAIL"
            lines.append(f"{status} {r.name:40s} passed={r.passed:4d} failed={r.failed:4d} "
                         f"worst_margin={_fmt(r.worst_margin)}")
            for f in r.failures:
                lines.append(f"    trial={f['trial']} margin={_fmt(f['margin'])} "
                             f"params={documents.dumps_json(f['params'], indent=0).replace(chr(10), ' ').strip()}")
        lines.append("ALL PASS" if self.all_passed else "VIOLATIONS FOUND")
        return "\n".join(lines) + "\n"


def _fmt(x: float) -> str:
    return documents.fmt(x) if math.isfinite(x) else repr(x)


# ---------------------------------------------------------------------------
# sampling helpers
# ---------------------------------------------------------------------------

def _disk(rng, r_min, r_max):
    r = r_min + (r_max - r_min) * rng.random()
    return r * cmath.exp(1j * (2 * math.pi * rng.random() - math.pi))


def sample_params(rng: np.random.Generator, box: ParamBox) -> ClassParams:
    gamma = box.gamma_max * (2 * rng.random() - 1)
    beta = box.beta_min + (box.beta_max - box.beta_min) * rng.random()
    lam = _disk(rng, 0.0, box.lam_max)
    z0 = _disk(rng, box.z0_min, box.z0_max)
    return ClassParams(gamma, beta, lam, z0)


def _cx(z) -> list:
    z = complex(z)
    return [z.real, z.imag]


def _pdict(p: ClassParams, **extra) -> dict:
    d = p.as_dict()
    d.update(extra)
    return d


def _random_poly(rng, degree=5):
    coeffs = rng.normal(size=degree + 1) + 1j * rng.normal(size=degree + 1)
    return coeffs, (lambda z: np.polyval(coeffs, z))


def _curve(p: ClassParams, cfg: CampaignConfig) -> BoundaryCurve:
    return boundary_curve(p, cfg.n_curve_samples, Method.CLOSED_FORM)


def member_integral(gen: SchwarzGenerator, p: ClassParams, quad: QuadratureConfig = DEFAULT_QUAD) -> complex:
    return integrate_segment(sample_member(gen, p), 0j, p.z0, quad)


def containment_trial(p: ClassParams, gen: SchwarzGenerator, curve: BoundaryCurve,
                      quad: QuadratureConfig = DEFAULT_QUAD) -> float:
    """Signed distance of int_0^{z0} P (P built from ``gen``) to the sampled boundary polygon."""
    return point_in_polygon(curve.polygon(), member_integral(gen, p, quad))


# ---------------------------------------------------------------------------
# properties; each takes (rng, cfg) and returns an Outcome
# ---------------------------------------------------------------------------

def prop_quadrature_linearity(rng, cfg):
    a = _disk(rng, 0, 0.95)
    b = _disk(rng, 0, 0.95)
    _, f = _random_poly(rng)
    _, g = _random_poly(rng)
    alpha = complex(rng.normal(), rng.normal())
    lhs = integrate_segment(lambda z: alpha * f(z) + g(z), a, b, cfg.quad)
    rhs = alpha * integrate_segment(f, a, b, cfg.quad) + integrate_segment(g, a, b, cfg.quad)
    return Outcome(cfg.tol("quadrature") - abs(lhs - rhs), {"a": _cx(a), "b": _cx(b)})


def prop_quadrature_additivity(rng, cfg):
    a = _disk(rng, 0, 0.95)
    c = _disk(rng, 0, 0.95)
    t = rng.random()
    b = a + t * (c - a)
    w = _disk(rng, 0, 0.9)
    f = lambda z: 1 / (1 - w * z) + z**3
    err = abs(integrate_segment(f, a, b, cfg.quad) + integrate_segment(f, b, c, cfg.quad)
              - integrate_segment(f, a, c, cfg.quad))
    return Outcome(cfg.tol("quadrature") - err, {"a": _cx(a), "c": _cx(c), "t": t, "w": _cx(w)})


def _random_convex_polygon(rng) -> Polygon:
    pts = rng.normal(size=24) + 1j * rng.normal(size=24)
    return convex_hull(pts)


def _interior_point(rng, poly: Polygon) -> complex:
    weights = rng.random(len(poly)) + 0.05
    return complex(np.dot(weights, poly.vertices) / weights.sum())


def prop_convex_midpoint(rng, cfg):
    poly = _random_convex_polygon(rng)
    u, v = _interior_point(rng, poly), _interior_point(rng, poly)
    margin = point_in_polygon(poly, 0.5 * (u + v)) if polygon_is_convex(poly) else -math.inf
    return Outcome(margin, {"u": _cx(u), "v": _cx(v)})


def prop_orientation_invariance(rng, cfg):
    poly = _random_convex_polygon(rng)
    w = complex(rng.normal(), rng.normal())
    rev = Polygon(poly.vertices[::-1])
    diff = abs(point_in_polygon(poly, w) - point_in_polygon(rev, w))
    return Outcome(1e-14 - diff, {"w": _cx(w)})


def prop_kernel_in_class(rng, cfg):
    p = sample_params(rng, cfg.param_box)
    a = _disk(rng, 0, 1.0)
    z = _disk(rng, 0, 0.99)
    val = (cmath.exp(1j * p.gamma) * extremal_H(z, a, p)).real - p.beta * math.cos(p.gamma)
    return Outcome(val, _pdict(p, a=_cx(a), z=_cx(z)))


def prop_member_in_class(rng, cfg):
    p = sample_params(rng, cfg.param_box)
    gen = random_generator(rng)
    direction = cmath.exp(2j * math.pi * rng.random())
    zs = np.linspace(0, 0.99, 64) * direction
    vals = (np.exp(1j * p.gamma) * sample_member(gen, p)(zs)).real - p.beta * math.cos(p.gamma)
    return Outcome(float(np.min(vals[1:])), _pdict(p, generator=gen.describe()))


def prop_kernel_normalization(rng, cfg):
    p = sample_params(rng, cfg.param_box)
    a = _disk(rng, 0, 1.0)
    fd = central_derivative(lambda z: extremal_H(z, a, p), 0j, order=1, h=1e-4)
    err = abs(fd - p.weight * p.lam)
    return Outcome(cfg.tol("normalization") - err, _pdict(p, a=_cx(a)))


def prop_unimodular_collapse(rng, cfg):
    p = sample_params(rng, cfg.param_box).replace(lam=cmath.exp(2j * math.pi * rng.random()))
    a1, a2 = _disk(rng, 0, 1.0), _disk(rng, 0, 1.0)
    z = _disk(rng, 0, 0.9)
    diff = abs(extremal_H(z, a1, p) - extremal_H(z, a2, p))
    return Outcome(cfg.tol("collapse") - diff, _pdict(p, a1=_cx(a1), a2=_cx(a2), z=_cx(z)))


def prop_mobius_involution(rng, cfg):
    lam = _disk(rng, 0, 0.95)
    z = _disk(rng, 0, 1.0)
    err = abs(mobius_delta(mobius_delta(z, lam), -lam) - z)
    return Outcome(cfg.tol("involution") - err, {"lambda": _cx(lam), "z": _cx(z)})


def prop_dual_route(rng, cfg):
    p = sample_params(rng, cfg.param_box)
    thetas = theta_grid(16)
    closed = boundary_point_closed_form(thetas, p)
    quad = np.array([boundary_point_quadrature(t, p, cfg.quad) for t in thetas])
    return Outcome(cfg.tol("dual_route") - float(np.max(np.abs(closed - quad))), _pdict(p))


def prop_convexity(rng, cfg):
    p = sample_params(rng, cfg.param_box)
    ok = polygon_is_convex(_curve(p, cfg).polygon())
    return Outcome(1.0 if ok else -1.0, _pdict(p))


def prop_simplicity(rng, cfg):
    p = sample_params(rng, cfg.param_box)
    ok = polygon_is_simple(_curve(p, cfg).polygon())
    return Outcome(1.0 if ok else -1.0, _pdict(p))


def prop_interiority(rng, cfg):
    p = sample_params(rng, cfg.param_box)
    center = interior_center(p, cfg.quad)
    return Outcome(point_in_polygon(_curve(p, cfg).polygon(), center), _pdict(p))


def prop_member_containment(rng, cfg):
    p = sample_params(rng, cfg.param_box)
    curve = _curve(p, cfg)
    gap = curve.max_gap()
    gens = [random_generator(rng) for _ in range(cfg.members_per_trial)]
    worst = min(containment_trial(p, g, curve, cfg.quad) for g in gens)
    return Outcome(worst + gap, _pdict(p, generators=[g.describe() for g in gens]))


def prop_boundary_extremality(rng, cfg):
    p = sample_params(rng, cfg.param_box)
    curve = _curve(p, cfg)
    gap = curve.max_gap()
    gens = [random_generator(rng) for _ in range(cfg.members_per_trial)]
    values = [member_integral(g, p, cfg.quad) for g in gens]
    hull = convex_hull(np.concatenate([curve.points, values]))
    deepest = max(point_in_polygon(hull, w) for w in curve.points)
    return Outcome(gap - deepest, _pdict(p, generators=[g.describe() for g in gens]))


def prop_theta_continuity(rng, cfg):
    p = sample_params(rng, cfg.param_box)
    n = cfg.n_curve_samples
    coarse = n * _curve(p, cfg).max_gap()
    fine = 4 * n * boundary_curve(p, 4 * n, Method.CLOSED_FORM).max_gap()
    # n * gap converges from below to 2 pi * max speed; C = 1.01 * fine
    return Outcome(1.01 * fine - coarse, _pdict(p))


def prop_membership_bound(rng, cfg):
    p = sample_params(rng, cfg.param_box)
    gen = random_generator(rng)
    z = _disk(rng, 0, 0.95)
    gb = growth_bound(z, p)
    dist = abs(sample_member(gen, p)(z) - gb.c)
    return Outcome(gb.r + cfg.tol("membership") - dist, _pdict(p, generator=gen.describe(), z=_cx(z)))


def prop_strict_membership(rng, cfg):
    p = sample_params(rng, cfg.param_box)
    gen = SchwarzGenerator(c=0.5, k=2)
    z = _disk(rng, 0.05, 0.95)
    gb = growth_bound(z, p)
    return Outcome(gb.r - abs(sample_member(gen, p)(z) - gb.c), _pdict(p, z=_cx(z)))


def prop_mobius_identities(rng, cfg):
    p = sample_params(rng, cfg.param_box)
    z = _disk(rng, 0.05, 0.9)
    m = mobius_triple(z, p)
    gb = growth_bound(z, p)
    s = abs(z) ** 2 * abs(m.tau) ** 2
    c_alt = (m.A + s * m.B) / (1 - s)
    r_alt = abs(z) * abs(m.tau) * abs(m.A + m.B) / (1 - s)
    sum_alt = p.weight * (1 - abs(p.lam) ** 2) * z / ((1 - p.lam * z) * (z - p.lam.conjugate()))
    scale = max(1.0, abs(gb.c), abs(m.A + m.B))
    err = max(abs(c_alt - gb.c), abs(r_alt - gb.r), abs(m.A + m.B - sum_alt)) / scale
    return Outcome(cfg.tol("identity") - err, _pdict(p, z=_cx(z)))


def prop_tau_identity(rng, cfg):
    p = sample_params(rng, cfg.param_box)
    z = _disk(rng, 0.0, 0.95)
    tau = mobius_triple(z, p).tau
    lhs = 1 - abs(z) ** 2 * abs(tau) ** 2
    rhs = (1 - abs(z) ** 2) * (1 + abs(z) ** 2 - 2 * (p.lam * z).real) / abs(1 - p.lam * z) ** 2
    return Outcome(cfg.tol("identity") - abs(lhs - rhs), _pdict(p, z=_cx(z)))


def prop_enclosure(rng, cfg):
    p = sample_params(rng, cfg.param_box)
    disk = enclosure_disk(p, cfg=cfg.quad)
    excess = float(np.max(np.abs(_curve(p, cfg).points - disk.center))) - disk.radius
    return Outcome(cfg.tol("enclosure") - excess, _pdict(p))


def prop_subclass_coherence(rng, cfg):
    p = sample_params(rng, cfg.param_box).replace(gamma=0.0)
    thetas = theta_grid(16)
    ref = boundary_point_closed_form(thetas, p)
    pr = SubclassParamsR(p.beta, p.lam, p.z0)
    alpha = complex(0.1 + 3 * rng.random(), 2 * rng.random() - 1)
    pf = SubclassParamsF(alpha, p.beta, p.lam, p.z0)
    vr = np.array([vR_point(t, pr, cfg.quad) for t in thetas])
    vg = vG_point_closed_form(thetas, pf)
    err = max(float(np.max(np.abs(vr - ref))), float(np.max(np.abs(vg - ref))))
    return Outcome(cfg.tol("coherence") - err, _pdict(p, alpha=_cx(alpha)))


def _random_F_params(rng):
    alpha = complex(0.2 + 3 * rng.random(), 2 * rng.random() - 1)
    beta = 0.98 * rng.random()
    a = _disk(rng, 0, 1.0)
    return SubclassParamsF(alpha, beta, 0, 0.5), a


def prop_F_second_derivative(rng, cfg):
    pf, a = _random_F_params(rng)
    d2 = central_derivative(lambda z: F_a0(z, a, pf, cfg.quad), 0j, order=2, h=1e-2)
    return Outcome(cfg.tol("second_derivative") - abs(d2),
                   {"alpha": _cx(pf.alpha), "beta": pf.beta, "a": _cx(a)})


def prop_F_third_derivative(rng, cfg):
    pf, a = _random_F_params(rng)
    d3 = central_derivative(lambda z: F_a0(z, a, pf, cfg.quad), 0j, order=3, h=1e-2)
    expected = 4 * a * (1 - pf.beta) / (1 + 2 * pf.alpha)
    return Outcome(cfg.tol("third_derivative") - abs(d3 - expected),
                   {"alpha": _cx(pf.alpha), "beta": pf.beta, "a": _cx(a)})


def prop_sup_monotone(rng, cfg):
    beta = 0.499 * rng.random()
    hi, _ = rbeta_sup_bound_check(beta, 0.999, 64)
    lo, _ = rbeta_sup_bound_check(beta, 0.99, 64)
    return Outcome(hi - lo, {"beta": beta})


def _random_curve_document(rng):
    p = sample_params(rng, ParamBox())
    n = int(rng.integers(16, 65))
    curve = boundary_curve(p, n, Method.CLOSED_FORM)
    return documents.curve_document({"params": p.as_dict()}, curve.thetas, curve.points), curve


def prop_document_roundtrip(rng, cfg):
    doc, curve = _random_curve_document(rng)
    ok = True
    for back in (documents.from_csv(documents.to_csv(doc)), documents.from_json(documents.to_json(doc))):
        th, pts = documents.curve_points(back)
        ok = ok and np.array_equal(th, curve.thetas) and np.array_equal(pts, curve.points)
    return Outcome(1.0 if ok else -1.0, {"samples": len(curve)})


def prop_svg_pure(rng, cfg):
    doc, curve = _random_curve_document(rng)
    copy = documents.from_json(documents.to_json(doc))
    ok = documents.to_svg(doc) == documents.to_svg(doc) == documents.to_svg(copy)
    return Outcome(1.0 if ok else -1.0, {"samples": len(curve)})


@dataclass(frozen=True)
class Property:
    name: str
    check: Callable
    strict: bool = False


REGISTRY: tuple = (
    Property("numerics.quadrature_linearity", prop_quadrature_linearity),
    Property("numerics.quadrature_path_additivity", prop_quadrature_additivity),
    Property("numerics.convex_midpoint_interior", prop_convex_midpoint, strict=True),
    Property("numerics.orientation_invariance", prop_orientation_invariance),
    Property("kernels.kernel_in_class", prop_kernel_in_class, strict=True),
    Property("kernels.member_in_class", prop_member_in_class, strict=True),
    Property("kernels.kernel_normalization", prop_kernel_normalization),
    Property("kernels.unimodular_collapse", prop_unimodular_collapse),
    Property("kernels.mobius_involution", prop_mobius_involution),
    Property("regions.dual_route", prop_dual_route),
    Property("regions.convexity", prop_convexity, strict=True),
    Property("regions.simplicity", prop_simplicity, strict=True),
    Property("regions.interiority", prop_interiority, strict=True),
    Property("regions.member_containment", prop_member_containment),
    Property("regions.boundary_extremality", prop_boundary_extremality),
    Property("regions.theta_continuity", prop_theta_continuity),
    Property("bounds.membership", prop_membership_bound),
    Property("bounds.strict_membership", prop_strict_membership, strict=True),
    Property("bounds.mobius_identities", prop_mobius_identities),
    Property("bounds.enclosure", prop_enclosure),
    Property("bounds.tau_identity", prop_tau_identity),
    Property("subclasses.coherence", prop_subclass_coherence),
    Property("subclasses.F_second_derivative", prop_F_second_derivative),
    Property("subclasses.F_third_derivative", prop_F_third_derivative),
    Property("subclasses.sup_monotone", prop_sup_monotone),
    Property("cli.document_roundtrip", prop_document_roundtrip, strict=True),
    Property("cli.svg_pure", prop_svg_pure, strict=True),
)


def property_names() -> list[str]:
    return [p.name for p in REGISTRY]


def _lookup(name: str) -> Property:
    for prop in REGISTRY:
        if prop.name == name:
            return prop
    raise InvalidParams(f"unknown property {name!r}")


def trial_rng(seed: int, name: str, trial: int) -> np.random.Generator:
    ss = np.random.SeedSequence(seed, spawn_key=(zlib.crc32(name.encode()), trial))
    return np.random.Generator(np.random.PCG64(ss))


def _passes(prop: Property, margin: float) -> bool:
    return margin > 0 if prop.strict else margin >= 0


def run_trial(cfg: CampaignConfig, name: str, trial: int) -> tuple[bool, Outcome]:
    prop = _lookup(name)
    try:
        out = prop.check(trial_rng(cfg.seed, name, trial), cfg)
    except (VarRegionError, ArithmeticError) as exc:
        return False, Outcome(-math.inf, {"error": f"{type(exc).__name__}: {exc}"})
    margin = float(out.margin)
    if math.isnan(margin):
        return False, out
    return _passes(prop, margin), out


def replay(cfg: CampaignConfig, name: str, trial: int) -> float:
    """Re-run one trial and return its margin."""
    return run_trial(cfg, name, trial)[1].margin


def run_campaign(cfg: CampaignConfig, threads: int | None = None,
                 names: list[str] | None = None) -> CampaignReport:
    names = property_names() if names is None else list(names)
    jobs = [(name, t) for name in names for t in range(cfg.trials)]
    work = lambda job: run_trial(cfg, *job)
    if threads is not None and threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            outcomes = list(pool.map(work, jobs))
    else:
        outcomes = [work(j) for j in jobs]

    results = {name: PropertyResult(name) for name in names}
    for (name, trial), (ok, out) in zip(jobs, outcomes):
        res = results[name]
        res.worst_margin = min(res.worst_margin, out.margin)
        if ok:
            res.passed += 1
        else:
            res.failed += 1
            res.failures.append({"trial": trial, "margin": out.margin, "params": out.params})
    return CampaignReport(cfg.seed, cfg.trials, [results[n] for n in names])
