"""Command-line entry point ``whitham-mi``.

Subcommands mirror the library: ``symbol``, ``index``, ``critical``,
``wave``, ``spectrum``, ``check`` and ``diagram``. Tables go to CSV with
17 significant digits or to JSON with a metadata header. Exit codes are
0 on success, 2 for usage or parameter errors, 3 for numerical failures.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys

import numpy as np

from . import __version__
from .diagrams import CurveKind, Plane, capillary_diagram, vorticity_diagram
from .dispersion import (Branch, DimensionalParams, DispersionModel, Family, group_velocity,
                         group_velocity_deriv, nondimensionalize, symbol, symbol_deriv)
from .errors import NumericalError, ParameterDomainError, UnsupportedModelError
from .floquet import bloch_spectrum, mi_growth_check
from .stability import critical_wavenumbers, delta_mi
from .waves import expansion_wave, refine_wave, residual

EXIT_USAGE = 2
EXIT_NUMERICAL = 3


class UsageError(Exception):
    pass


# ----------------------------------------------------------------- model flags

def _add_model_flags(p):
    g = p.add_argument_group("model")
    g.add_argument("--family", choices=[f.value for f in Family])
    g.add_argument("--tau", type=float, help="nondimensional surface tension T/(g d^2)")
    g.add_argument("--varpi", type=float, help="nondimensional vorticity gamma sqrt(d/g)")
    g.add_argument("--branch", choices=[b.value for b in Branch], default=Branch.PLUS.value)
    d = p.add_argument_group("dimensional model (replaces --tau/--varpi)")
    d.add_argument("--g", type=float)
    d.add_argument("--d", type=float)
    d.add_argument("--T", type=float)
    d.add_argument("--gamma", type=float)


def model_from_args(args):
    """Build the model; returns ``(model, extra_metadata)``."""
    dims = {k: getattr(args, k) for k in ("g", "d", "T", "gamma") if getattr(args, k) is not None}
    if dims:
        if args.tau is not None or args.varpi is not None:
            raise UsageError("dimensional flags (--g --d --T --gamma) conflict with --tau/--varpi")
        family = args.family
        if family is None:
            family = ("vorticity" if dims.get("gamma")
                      else "capillary" if dims.get("T") else "gravity")
        if family == "gravity" and dims.get("T"):
            raise UsageError("--T is not allowed with --family gravity")
        if family != "vorticity" and dims.get("gamma"):
            raise UsageError("--gamma requires --family vorticity")
        params = DimensionalParams(**dims)
        model, speed, length = nondimensionalize(params, family, args.branch)
        meta = {"dimensional": {"g": params.g, "d": params.d, "T": params.T,
                                "gamma": params.gamma},
                "speed_scale": speed, "length_scale": length}
        return model, meta
    family = args.family
    if family is None:
        family = ("vorticity" if args.varpi is not None
                  else "capillary" if args.tau is not None else "gravity")
    if family == "gravity" and args.tau not in (None, 0.0):
        raise UsageError("--tau is not allowed with --family gravity")
    if family != "vorticity" and args.varpi is not None:
        raise UsageError("--varpi requires --family vorticity")
    if family == "vorticity" and args.tau is not None:
        raise UsageError("--tau is not allowed with --family vorticity")
    if family == "capillary" and args.tau is None:
        raise UsageError("--family capillary needs --tau (or dimensional --T)")
    if family == "vorticity" and args.varpi is None:
        raise UsageError("--family vorticity needs --varpi (or dimensional --gamma)")
    model = DispersionModel(Family(family), tau=args.tau or 0.0, varpi=args.varpi or 0.0,
                            branch=Branch(args.branch))
    return model, {}


# --------------------------------------------------------------------- writers

def _fmt(v):
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (float, np.floating)):
        return "%.17g" % v
    return str(v)


def _jsonable(v):
    if isinstance(v, dict):
        return {k: _jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    if isinstance(v, (np.bool_,)):
        return bool(v)
    if isinstance(v, (np.integer,)):
        return int(v)
    if isinstance(v, (float, np.floating)):
        return float(v) if math.isfinite(v) else None
    return v


def render(fmt, columns, rows, metadata, payload=None):
    """Serialize a table (CSV) or ``{"metadata", "results"}`` (JSON)."""
    if fmt == "json":
        doc = {"metadata": metadata,
               "results": payload if payload is not None
               else [dict(zip(columns, r)) for r in rows]}
        return json.dumps(_jsonable(doc), indent=2, allow_nan=False) + "\n"
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for r in rows:
        w.writerow([_fmt(v) for v in r])
    return buf.getvalue()


def _emit(args, text):
    if args.output in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(args.output, "w", newline="") as fh:
            fh.write(text)


def _metadata(args, model, extra, **grid):
    meta = {"command": args.command, "version": __version__, "model": model.to_dict(),
            "degenerate": model.is_degenerate}
    meta.update(extra)
    if grid:
        meta["grid"] = grid
    return meta


def _z_grid(args):
    if args.z is not None:
        return np.array(args.z, dtype=float), {"z": list(args.z)}
    if args.n < 1 or not 0 <= args.zmin <= args.zmax:
        raise UsageError("need --n >= 1 and 0 <= --zmin <= --zmax")
    return np.linspace(args.zmin, args.zmax, args.n), {
        "zmin": args.zmin, "zmax": args.zmax, "n": args.n}


# -------------------------------------------------------------------- commands

def cmd_symbol(args):
    model, extra = model_from_args(args)
    z, grid = _z_grid(args)
    cols = ["z", "m", "m1", "m2", "group_velocity", "group_velocity_deriv", "degenerate"]
    vals = [z, symbol(model, z), symbol_deriv(model, z, 1), symbol_deriv(model, z, 2),
            group_velocity(model, z), group_velocity_deriv(model, z)]
    rows = [[float(v[i]) for v in vals] + [model.is_degenerate] for i in range(len(z))]
    return render(args.format, cols, rows, _metadata(args, model, extra, **grid))


def cmd_index(args):
    model, extra = model_from_args(args)
    z, grid = _z_grid(args)
    reports = [delta_mi(model, float(zi)) for zi in z]
    cols = ["z", "delta_bf", "delta_mi", "factor_group_curvature", "factor_longshort",
            "factor_second_harmonic", "verdict", "mechanisms"]
    rows = [[r.z, r.delta_bf, r.delta_mi, r.factor_group_curvature, r.factor_longshort,
             r.factor_second_harmonic, r.verdict.value, ";".join(m.label for m in r.mechanisms)]
            for r in reports]
    return render(args.format, cols, rows, _metadata(args, model, extra, **grid),
                  payload=[r.to_dict() for r in reports])


def cmd_critical(args):
    model, extra = model_from_args(args)
    roots = critical_wavenumbers(model, args.zmin, args.zmax, args.n, args.spacing)
    rows = [[r.z, r.mechanism.label] for r in roots]
    return render(args.format, ["z", "mechanism"], rows,
                  _metadata(args, model, extra, zmin=args.zmin, zmax=args.zmax, n=args.n,
                            spacing=args.spacing))


def _wave(args, model):
    seed = expansion_wave(model, args.k, args.a, getattr(args, "b", 0.0))
    if getattr(args, "expansion_only", False):
        return seed
    return refine_wave(model, seed, N_F=args.N)


def cmd_wave(args):
    model, extra = model_from_args(args)
    wave = _wave(args, model)
    cols = ["n", "coefficient"]
    rows = [[n, float(h)] for n, h in enumerate(wave.cosine_coeffs)]
    meta = _metadata(args, model, extra, k=args.k, a=args.a, b=args.b, N=args.N)
    meta.update(c=wave.c, residual=residual(model, wave), source=wave.source.value)
    return render(args.format, cols, rows, meta, payload=wave.to_dict())


def cmd_spectrum(args):
    model, extra = model_from_args(args)
    wave = _wave(args, model)
    spectra = [bloch_spectrum(model, wave, xi, args.N, args.r_origin) for xi in args.xi]
    rows = [[s.xi, float(ev.real), float(ev.imag)] for s in spectra for ev in s.eigenvalues]
    meta = _metadata(args, model, extra, k=args.k, a=args.a, xi=list(args.xi), N_F=args.N)
    meta["max_real_near_origin"] = [s.max_real_near_origin for s in spectra]
    return render(args.format, ["xi", "re", "im"], rows, meta,
                  payload={"wave": wave.to_dict(), "spectra": [s.to_dict() for s in spectra]})


def cmd_check(args):
    model, extra = model_from_args(args)
    res = mi_growth_check(model, args.k, args.a, xi_list=args.xi, N_F=args.N)
    d = res.to_dict()
    cols = ["predicted", "observed", "agree", "indeterminate", "max_real",
            "unstable_threshold", "stable_threshold"]
    rows = [[d[c] for c in cols]]
    return render(args.format, cols, rows,
                  _metadata(args, model, extra, k=args.k, a=args.a, N_F=args.N), payload=d)


_SVG_COLORS = {
    CurveKind.GROUP_VEL_EXTREMUM: "#1f77b4", CurveKind.LONG_SHORT_RESONANCE: "#2ca02c",
    CurveKind.SECOND_HARMONIC: "#9467bd", CurveKind.BF_RESONANCE_PLUS: "#d62728",
    CurveKind.BF_RESONANCE_MINUS: "#ff7f0e", CurveKind.CRITICAL_TAU: "#555555",
    CurveKind.GRAVITY_BF_ROOT: "#555555",
}


def render_svg(curves, xlim, ylim, size=(640, 480), pad=40):
    """Bare polyline rendering; annotation lines are dashed."""
    W, H = size
    sx = (W - 2 * pad) / (xlim[1] - xlim[0])
    sy = (H - 2 * pad) / (ylim[1] - ylim[0])
    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" '
           f'viewBox="0 0 {W} {H}">',
           f'<rect x="{pad}" y="{pad}" width="{W - 2 * pad}" height="{H - 2 * pad}" '
           'fill="none" stroke="black"/>']
    for c in curves:
        pts = " ".join(f"{pad + (x - xlim[0]) * sx:.2f},{H - pad - (y - ylim[0]) * sy:.2f}"
                       for x, y in c.points)
        dash = ' stroke-dasharray="6,4"' if c.annotation else ""
        out.append(f'<polyline fill="none" stroke="{_SVG_COLORS[c.kind]}" stroke-width="1.5"'
                   f'{dash} points="{pts}"><title>{c.kind.value}</title></polyline>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def cmd_diagram(args):
    plane = Plane(args.plane)
    if plane is Plane.CAPILLARY:
        xr = (args.xmin if args.xmin is not None else 0.05, args.xmax if args.xmax is not None else 32.0)
        yr = (args.ymin if args.ymin is not None else 1e-3, args.ymax if args.ymax is not None else 3.0)
        curves = capillary_diagram(xr, yr, args.resolution)
        axes = {"x": "kd", "y": "k sqrt(T/g)"}
    else:
        xr = (args.xmin if args.xmin is not None else -10.0, args.xmax if args.xmax is not None else 10.0)
        yr = (args.ymin if args.ymin is not None else 0.05, args.ymax if args.ymax is not None else 6.0)
        curves = vorticity_diagram(xr, yr, args.resolution)
        axes = {"x": "varpi = gamma sqrt(d/g)", "y": "kd"}
    meta = {"command": "diagram", "version": __version__, "plane": plane.value, "axes": axes,
            "grid": {"x_range": list(xr), "y_range": list(yr), "resolution": args.resolution}}
    rows = [[i, c.kind.value, c.annotation, float(x), float(y)]
            for i, c in enumerate(curves) for x, y in c.points]
    text = render(args.format, ["curve", "kind", "annotation", "x", "y"], rows, meta,
                  payload=[c.to_dict() for c in curves])
    if args.svg:
        with open(args.svg, "w") as fh:
            fh.write(render_svg(curves, xr, yr))
    return text


# ---------------------------------------------------------------------- parser

def _add_output(p):
    p.add_argument("--output", "-o", help="output file (default: stdout)")
    p.add_argument("--format", choices=["csv", "json"], default=None,
                   help="default: json for *.json outputs, otherwise csv")


def _add_zgrid(p, zmin=0.05, zmax=10.0, n=100):
    p.add_argument("--z", type=float, nargs="+", help="explicit wave numbers kd")
    p.add_argument("--zmin", type=float, default=zmin)
    p.add_argument("--zmax", type=float, default=zmax)
    p.add_argument("--n", type=int, default=n)


def _add_wave(p, default_N=32):
    p.add_argument("--k", type=float, required=True)
    p.add_argument("--a", type=float, required=True)
    p.add_argument("--N", type=int, default=default_N, help="Fourier truncation N_F")


def build_parser():
    parser = argparse.ArgumentParser(prog="whitham-mi", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("symbol", help="tabulate m, its derivatives and the group velocity")
    _add_model_flags(p)
    _add_zgrid(p, zmax=5.0)
    _add_output(p)
    p.set_defaults(func=cmd_symbol)

    p = sub.add_parser("index", help="Delta_BF, Delta_MI and verdicts")
    _add_model_flags(p)
    _add_zgrid(p)
    _add_output(p)
    p.set_defaults(func=cmd_index)

    p = sub.add_parser("critical", help="roots of the four mechanism functions")
    _add_model_flags(p)
    p.add_argument("--zmin", type=float, default=0.05)
    p.add_argument("--zmax", type=float, default=20.0)
    p.add_argument("--n", type=int, default=2000)
    p.add_argument("--spacing", choices=["linear", "log"], default="linear")
    _add_output(p)
    p.set_defaults(func=cmd_critical)

    p = sub.add_parser("wave", help="small-amplitude traveling wave")
    _add_model_flags(p)
    _add_wave(p)
    p.add_argument("--b", type=float, default=0.0)
    p.add_argument("--expansion-only", action="store_true",
                   help="skip Newton refinement (needed when b != 0)")
    _add_output(p)
    p.set_defaults(func=cmd_wave)

    p = sub.add_parser("spectrum", help="Hill's-method spectrum at given Bloch parameters")
    _add_model_flags(p)
    _add_wave(p)
    p.add_argument("--xi", type=float, nargs="+", required=True)
    p.add_argument("--r-origin", type=float, default=None)
    _add_output(p)
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("check", help="index verdict against the Hill's-method growth rate")
    _add_model_flags(p)
    _add_wave(p)
    p.add_argument("--xi", type=float, nargs="+", default=None,
                   help="Bloch parameters (default: multiples of a)")
    _add_output(p)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("diagram", help="stability diagram curves")
    p.add_argument("--plane", choices=[pl.value for pl in Plane], required=True)
    p.add_argument("--xmin", type=float)
    p.add_argument("--xmax", type=float)
    p.add_argument("--ymin", type=float)
    p.add_argument("--ymax", type=float)
    p.add_argument("--resolution", type=int, default=300)
    p.add_argument("--svg", help="also write an SVG rendering here")
    _add_output(p)
    p.set_defaults(func=cmd_diagram)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.format is None:
        args.format = "json" if (args.output or "").endswith(".json") else "csv"
    try:
        text = args.func(args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"whitham-mi {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ParameterDomainError, UnsupportedModelError) as exc:
        print(f"whitham-mi {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except NumericalError as exc:
        print(f"whitham-mi {args.command}: numerical error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    _emit(args, text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
