"""
Command-line interface.

    varregion boundary --class P --gamma 0.3 --beta 0.2 --lambda 0.1,0.4 --z0 0.5,0 --format csv
    varregion point --kind interior --lambda 0.5,0 --z0 0.5,0
    varregion growth --z 0.5,0
    varregion diskbound --z0 0.5,0
    varregion verify --seed 42 --trials 50
    varregion table1 --out figures/

Exit codes: 0 ok, 2 invalid input, 3 quadrature did not converge,
4 a checked property was violated.
"""

from __future__ import annotations

import argparse
import os
import re
import sys
from pathlib import Path

import numpy as np

from . import __version__
from . import documents
from .bounds import enclosure_disk, growth_bound
from .errors import InvalidParams, NonConvergence, VarRegionError
from .kernels import ClassParams
from .numerics import DEFAULT_QUAD, QuadratureConfig, polygon_is_convex, polygon_is_simple
from .regions import (Method, _map, boundary_curve, boundary_point_closed_form,
                      boundary_point_quadrature, degenerate_point, interior_center, theta_grid)
from .subclasses import (SubclassParamsF, SubclassParamsR, vG_boundary_closed_form,
                         vG_membership_bound, vG_point_closed_form, vR_point)
from .verify import CampaignConfig, run_campaign

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_NONCONVERGENCE = 3
EXIT_VIOLATION = 4

# (z0, lambda, beta, gamma) for the five reference figures
FIGURE_PARAMS = (
    (0.335192 - 0.787333j, 0.0737292 + 0.466706j, 0.591244, 0.383292),
    (-0.261209 + 0.926935j, -0.28588 + 0.307498j, 0.700318, -0.87825),
    (-0.41227 - 0.521734j, -0.0875648 + 0.0714166j, 0.602203, 0.910581),
    (0.771264 + 0.151204j, -0.391149 - 0.294747j, 0.928608, 1.55854),
    (0.335626 + 0.929093j, 0.00010443 + 0.0255256j, 0.76622, 1.5449),
)


class PropertyViolation(VarRegionError):
    pass


def parse_complex(text: str) -> complex:
    """Parse "RE,IM" (or a bare real) into a complex number."""
    parts = text.split(",")
    try:
        if len(parts) == 1:
            return complex(float(parts[0]), 0.0)
        if len(parts) == 2:
            return complex(float(parts[0]), float(parts[1]))
    except ValueError:
        pass
    raise argparse.ArgumentTypeError(f"expected RE,IM, got {text!r}")


def quad_config() -> QuadratureConfig:
    raw = os.environ.get("VARREGION_TOL")
    if raw is None or raw == "":
        return DEFAULT_QUAD
    try:
        tol = float(raw)
    except ValueError:
        raise InvalidParams(f"VARREGION_TOL is not a number: {raw!r}") from None
    return QuadratureConfig(abs_tol=tol, rel_tol=DEFAULT_QUAD.rel_tol,
                            max_subdivisions=DEFAULT_QUAD.max_subdivisions)


def _threads(args) -> int:
    n = args.threads if args.threads is not None else (os.cpu_count() or 1)
    if n < 1:
        raise InvalidParams(f"--threads must be >= 1, got {n}")
    return n


def _params(args):
    """Build the parameter object for the selected class."""
    if args.cls in ("R", "G") and args.gamma != 0:
        raise InvalidParams(f"class {args.cls} fixes gamma = 0, got --gamma {args.gamma}")
    if args.alpha is not None and args.cls != "G":
        raise InvalidParams("--alpha only applies to --class G")
    if args.cls == "R":
        return SubclassParamsR(args.beta, args.lam, args.z0)
    if args.cls == "G":
        alpha = args.alpha if args.alpha is not None else 1 + 0j
        return SubclassParamsF(alpha, args.beta, args.lam, args.z0)
    return ClassParams(args.gamma, args.beta, args.lam, args.z0)


def _meta(args, params, **extra) -> dict:
    meta = {"tool": "varregion", "version": __version__, "command": args.command,
            "class": args.cls}
    cp = params if isinstance(params, ClassParams) else params.as_class_params()
    meta["params"] = cp.as_dict()
    if isinstance(params, SubclassParamsF):
        meta["params"]["alpha"] = [params.alpha.real, params.alpha.imag]
    meta.update(extra)
    return meta


def _sample(params, method: Method, n: int, cfg: QuadratureConfig, threads: int):
    """(thetas, points) on the uniform grid, through the per-point formulas of the class."""
    cp = params if isinstance(params, ClassParams) else params.as_class_params()
    thetas = theta_grid(n)
    if method is Method.CLOSED_FORM:
        if isinstance(params, SubclassParamsF):
            return thetas, vG_point_closed_form(thetas, params)
        return thetas, boundary_point_closed_form(thetas, cp)
    if isinstance(params, SubclassParamsR):
        fn = lambda t: vR_point(t, params, cfg)
    else:
        fn = lambda t: boundary_point_quadrature(t, cp, cfg)
    return thetas, np.array(_map(fn, thetas, threads), dtype=complex)


def cmd_boundary(args) -> documents.OutputDocument:
    params = _params(args)
    cfg = quad_config()
    threads = _threads(args)
    cp = params if isinstance(params, ClassParams) else params.as_class_params()
    if cp.degenerate:
        return documents.point_document(_meta(args, params, method=args.method), degenerate_point(cp))
    if args.samples < 3:
        raise InvalidParams(f"--samples must be >= 3, got {args.samples}")
    if isinstance(params, SubclassParamsF) and abs(cp.lam) >= 1:
        raise InvalidParams("the boundary curve needs |lambda| < 1")

    n = args.samples
    if args.method == "both":
        thetas, closed = _sample(params, Method.CLOSED_FORM, n, cfg, threads)
        _, quad = _sample(params, Method.QUADRATURE, n, cfg, threads)
        dev = float(np.max(np.abs(closed - quad)))
        quad_rows = documents.curve_document({}, thetas, quad).payload["samples"]
        meta = _meta(args, params, method="both", max_deviation=dev)
        return documents.curve_document(meta, thetas, closed,
                                        extra={"quadrature_samples": quad_rows, "max_deviation": dev})
    thetas, pts = _sample(params, Method(args.method), n, cfg, threads)
    return documents.curve_document(_meta(args, params, method=args.method), thetas, pts)


def cmd_point(args) -> documents.OutputDocument:
    params = _params(args)
    cp = params if isinstance(params, ClassParams) else params.as_class_params()
    if args.kind == "degenerate":
        value = degenerate_point(cp)
    else:
        value = interior_center(cp, quad_config())
    return documents.point_document(_meta(args, params, point=args.kind), value)


def cmd_growth(args) -> documents.OutputDocument:
    params = _params(args)
    if args.z is None:
        raise InvalidParams("growth needs --z RE,IM")
    if isinstance(params, SubclassParamsF):
        gb = vG_membership_bound(args.z, params)
    else:
        cp = params if isinstance(params, ClassParams) else params.as_class_params()
        gb = growth_bound(args.z, cp)
    meta = _meta(args, params, z=[args.z.real, args.z.imag])
    return documents.disk_document(meta, gb.c, gb.r, kind="growth")


def cmd_diskbound(args) -> documents.OutputDocument:
    params = _params(args)
    cp = params if isinstance(params, ClassParams) else params.as_class_params()
    disk = enclosure_disk(cp, cfg=quad_config())
    return documents.disk_document(_meta(args, params, path="segment"), disk.center, disk.radius)


def _check_polygon(curve, label: str):
    poly = curve.polygon()
    if not polygon_is_convex(poly):
        raise PropertyViolation(f"{label}: boundary polygon is not convex")
    if not polygon_is_simple(poly):
        raise PropertyViolation(f"{label}: boundary polygon is not simple")


def cmd_table1(args) -> list[tuple[str, documents.OutputDocument]]:
    """Curves for the five reference parameter sets, class P and class G (gamma = 0)."""
    cfg = quad_config()
    threads = _threads(args)
    if args.samples < 16:
        raise InvalidParams(f"--samples must be >= 16, got {args.samples}")
    probe = theta_grid(64)
    out = []
    for row, (z0, lam, beta, gamma) in enumerate(FIGURE_PARAMS, start=1):
        p = ClassParams(gamma, beta, lam, z0)
        closed = boundary_point_closed_form(probe, p)
        quad = np.array([boundary_point_quadrature(t, p, cfg) for t in probe])
        dev = float(np.max(np.abs(closed - quad)))
        if dev > 1e-9:
            raise PropertyViolation(f"row {row}: closed form and quadrature differ by {dev:.3e}")

        curve_p = boundary_curve(p, args.samples, Method.CLOSED_FORM)
        _check_polygon(curve_p, f"row {row} class P")
        meta = {"tool": "varregion", "version": __version__, "command": "table1", "row": row,
                "class": "P", "method": "closed", "params": p.as_dict(), "dual_route_deviation": dev}
        out.append((f"row{row}_P", documents.curve_document(meta, curve_p.thetas, curve_p.points)))

        pf = SubclassParamsF(1 + 0j, beta, lam, z0)
        curve_g = vG_boundary_closed_form(pf, args.samples)
        _check_polygon(curve_g, f"row {row} class G")
        meta = dict(meta, **{"class": "G", "params": dict(pf.as_class_params().as_dict(), alpha=[1.0, 0.0])})
        meta.pop("dual_route_deviation")
        out.append((f"row{row}_G", documents.curve_document(meta, curve_g.thetas, curve_g.points)))
    return out


def cmd_verify(args):
    cfg = CampaignConfig(seed=args.seed, trials=args.trials, quad=quad_config())
    return run_campaign(cfg, threads=_threads(args))


def _write(text: str, out: str | None):
    if out is None or out == "-":
        sys.stdout.write(text)
    else:
        Path(out).write_text(text, encoding="utf-8", newline="\n")


def _add_class_flags(p: argparse.ArgumentParser):
    p.add_argument("--class", dest="cls", choices=("P", "R", "G"), default="P")
    p.add_argument("--gamma", type=float, default=0.0)
    p.add_argument("--beta", type=float, default=0.0)
    p.add_argument("--alpha", type=parse_complex, default=None, help="RE,IM; class G only (metadata)")
    p.add_argument("--lambda", dest="lam", type=parse_complex, default=0j, help="RE,IM")
    p.add_argument("--z0", type=parse_complex, default=0.5 + 0j, help="RE,IM")


def _add_output_flags(p: argparse.ArgumentParser, formats=("csv", "json", "svg"), default="csv"):
    p.add_argument("--format", choices=formats, default=default)
    p.add_argument("--out", default=None, help="output path (stdout when omitted)")
    p.add_argument("--threads", type=int, default=None)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="varregion",
                                     description="Regions of variability for int_0^z0 P over P(lambda).")
    parser.add_argument("--version", action="version", version=f"varregion {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    b = sub.add_parser("boundary", help="sample the boundary curve")
    _add_class_flags(b)
    b.add_argument("--samples", type=int, default=720)
    b.add_argument("--method", choices=("closed", "quadrature", "both"), default="closed")
    _add_output_flags(b)

    pt = sub.add_parser("point", help="degenerate point or interior center")
    _add_class_flags(pt)
    pt.add_argument("--kind", choices=("degenerate", "interior"), default="interior")
    _add_output_flags(pt, ("csv", "json"))

    g = sub.add_parser("growth", help="disk that holds P(z) for every member")
    _add_class_flags(g)
    g.add_argument("--z", type=parse_complex, default=None, help="RE,IM")
    _add_output_flags(g, ("csv", "json"))

    d = sub.add_parser("diskbound", help="disk enclosing the whole region")
    _add_class_flags(d)
    _add_output_flags(d, ("csv", "json"))

    v = sub.add_parser("verify", help="run the seeded property campaign")
    v.add_argument("--seed", type=int, default=42)
    v.add_argument("--trials", type=int, default=50)
    _add_output_flags(v, ("text", "json"), default="text")

    t = sub.add_parser("table1", help="curves for the five reference parameter sets")
    t.add_argument("--samples", type=int, default=720)
    t.add_argument("--format", choices=("csv", "json", "svg"), default="csv")
    t.add_argument("--out", default="table1", help="output directory")
    t.add_argument("--threads", type=int, default=None)
    return parser


def _run(args) -> int:
    if args.command == "verify":
        report = cmd_verify(args)
        _write(report.to_text() if args.format == "text" else report.to_json(), args.out)
        return EXIT_OK if report.all_passed else EXIT_VIOLATION
    if args.command == "table1":
        docs = cmd_table1(args)
        outdir = Path(args.out)
        outdir.mkdir(parents=True, exist_ok=True)
        for stem, doc in docs:
            _write(documents.render(doc, args.format), str(outdir / f"{stem}.{args.format}"))
        return EXIT_OK

    handler = {"boundary": cmd_boundary, "point": cmd_point,
               "growth": cmd_growth, "diskbound": cmd_diskbound}[args.command]
    doc = handler(args)
    if args.format == "svg" and doc.kind != "curve":
        raise InvalidParams("SVG output needs a curve; the region is a single point")
    _write(documents.render(doc, args.format), args.out)
    return EXIT_OK


_COMPLEX_FLAGS = ("--alpha", "--lambda", "--z0", "--z")
_NEGATIVE_VALUE = re.compile(r"^-[\d.]")


def _join_negative_values(argv: list[str]) -> list[str]:
    # argparse reads "-0.4,0.3" as an option; glue it to its flag instead
    out = []
    i = 0
    while i < len(argv):
        tok = argv[i]
        if tok in _COMPLEX_FLAGS and i + 1 < len(argv) and _NEGATIVE_VALUE.match(argv[i + 1]):
            out.append(f"{tok}={argv[i + 1]}")
            i += 2
            continue
        out.append(tok)
        i += 1
    return out


def main(argv=None) -> int:
    parser = build_parser()
    argv = sys.argv[1:] if argv is None else list(argv)
    args = parser.parse_args(_join_negative_values(argv))
    try:
        return _run(args)
    except NonConvergence as exc:
        print(f"varregion: quadrature did not converge: {exc}", file=sys.stderr)
        return EXIT_NONCONVERGENCE
    except PropertyViolation as exc:
        print(f"varregion: property violated: {exc}", file=sys.stderr)
        return EXIT_VIOLATION
    except (InvalidParams, ValueError) as exc:
        print(f"varregion: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
