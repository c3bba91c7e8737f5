"""Batch command-line front end.

Each subcommand reads a model (or creep data) file, runs one pipeline and
writes a CSV or report with a ``#`` provenance header. Exit status is 0 on
success, 2 for input and schema errors, 3 for numerical failures and 4 when
an output violates a physical invariant.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .dispersion import (
    NEWTONIAN_WINDOW,
    classify_from_creep,
    classify_model,
    dispersion_curve,
    high_freq_exponent,
    write_dispersion_csv,
)
from .duality import CreepCurve, creep_from_model, duality_residual, volterra_solve_creep
from .errors import InputError, InvariantError, ViscoWaveError
from .io_utils import atomic_write
from .kernels import load_model
from .wavefield import IntegrationControls, seismogram, snapshot, write_field_csv

EXIT_OK, EXIT_INPUT, EXIT_NUMERICAL, EXIT_INVARIANT = 0, 2, 3, 4


def make_grid(lo: float, hi: float, n: int, spacing: str) -> np.ndarray:
    """Grid of ``n`` points on ``[lo, hi]``; geometric grids need ``lo > 0``."""
    if n < 2 or not hi > lo:
        raise InputError(f"degenerate grid: need points >= 2 and max > min (got {n}, [{lo}, {hi}])")
    if spacing == "linear":
        return np.linspace(lo, hi, n)
    if spacing == "geometric":
        if not lo > 0:
            raise InputError("geometric spacing needs a positive lower bound")
        return np.geomspace(lo, hi, n)
    raise InputError(f"unknown spacing {spacing!r}")


def _provenance(args: argparse.Namespace, methods: str) -> list[str]:
    cfg = {k: v for k, v in sorted(vars(args).items()) if k != "func"}
    return [
        f"viscowave {__version__}",
        f"command: {args.command}",
        "config: " + json.dumps(cfg, sort_keys=True, default=str),
        f"method: {methods}",
    ]


def _write_report(path: Path | None, text: str, payload: dict, head: list[str]) -> None:
    body = "".join(f"# {h}\n" for h in head) + text
    if path is None:
        sys.stdout.write(text)
        return
    atomic_write(path, body)
    atomic_write(path.with_name(path.name + ".json"), json.dumps(payload, indent=2, sort_keys=True) + "\n")


def _json_num(v):
    if isinstance(v, float) and not math.isfinite(v):
        return str(v)
    return v


# --------------------------------------------------------------------------
# commands


def cmd_curves(args) -> int:
    model = load_model(args.model)
    omega = make_grid(args.omega_min, args.omega_max, args.points, args.spacing)
    samples = dispersion_curve(model, omega)
    write_dispersion_csv(args.out, samples, _provenance(args, "closed-form wavenumber"))
    return EXIT_OK


def cmd_creep(args) -> int:
    model = load_model(args.model)
    t = make_grid(args.t_min, args.t_max, args.points, args.spacing)
    curve = creep_from_model(model, t, quad_tol=args.tol_quad)
    head = _provenance(args, curve.method)
    if args.check_points:
        # cross-check on a uniform grid t_k = k h, which the time-domain solver needs
        h = args.t_max / args.check_points
        tu = h * np.arange(1, args.check_points + 1)
        ref = creep_from_model(model, tu, quad_tol=args.tol_quad)
        vol = volterra_solve_creep(model, tu)
        resid = duality_residual(model, ref)
        agree = float(np.max(np.abs(vol.C - ref.C)) / np.max(np.abs(ref.C)))
        head.append(f"residual={resid:.6g} volterra_agreement={agree:.6g} check_step={h:.6g} volterra={vol.method}")
        if resid > 1e-6 * args.t_max:
            curve.to_csv(args.out, head)
            raise InvariantError(f"creep: duality residual {resid:.3g} exceeds 1e-6 t_max")
    curve.to_csv(args.out, head)
    return EXIT_OK


def cmd_classify(args) -> int:
    if args.model is not None:
        report = classify_model(load_model(args.model))
        source = "model"
    else:
        curve = CreepCurve.from_csv(args.creep, tol_c0=args.tol_c0)
        report = classify_from_creep(curve, rho=args.rho, tol_c0=args.tol_c0)
        source = "creep data"
    text = report.to_text()
    _write_report(args.out, text, report.to_dict(), _provenance(args, f"classification from {source}"))
    if args.out is not None:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_fit_exponent(args) -> int:
    model = load_model(args.model)
    lo = args.omega_min if args.omega_min is not None else NEWTONIAN_WINDOW[0]
    hi = args.omega_max if args.omega_max is not None else NEWTONIAN_WINDOW[1]
    fit = high_freq_exponent(model, lo, hi, args.points)
    text = (
        f"slope: {fit.slope:.12g}\nstderr: {fit.stderr:.12g}\nintercept: {fit.intercept:.12g}\n"
        f"window: [{fit.omega_min:.12g}, {fit.omega_max:.12g}]\npoints: {fit.n_points}\n"
    )
    payload = {k: _json_num(v) for k, v in vars(fit).items()}
    _write_report(args.out, text, payload, _provenance(args, "log-log least squares"))
    if args.out is not None:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_green(args) -> int:
    model = load_model(args.model)
    ctl = IntegrationControls(tail_tol=args.tol_tail, shift_factor=args.shift_factor)
    if (args.at_t is None) == (args.at_x is None):
        raise InputError("green: give exactly one of --at-t (snapshot) or --at-x (seismogram)")
    if args.at_t is not None:
        grid = make_grid(args.x_min, args.x_max, args.points, "linear")
        samples, axis = snapshot(model, args.at_t, grid, ctl), "x"
    else:
        grid = make_grid(args.t_min, args.t_max, args.points, args.spacing)
        samples, axis = seismogram(model, args.at_x, grid, ctl), "t"
    head = _provenance(args, "Bromwich line quadrature")
    n_low = sum(not s.confident for s in samples)
    head.append(f"low_confidence_points={n_low}")
    write_field_csv(args.out, samples, axis, model, ctl, head)
    return EXIT_OK


# --------------------------------------------------------------------------
# parser


def _positive(s: str) -> float:
    v = float(s)
    if not v > 0:
        raise argparse.ArgumentTypeError(f"expected a positive number, got {s}")
    return v


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="viscowave", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("curves", help="attenuation and phase velocity over a frequency grid")
    p.add_argument("--model", required=True, type=Path)
    p.add_argument("--omega-min", type=_positive, default=1e-2)
    p.add_argument("--omega-max", type=_positive, default=1e6)
    p.add_argument("--points", type=int, default=200)
    p.add_argument("--spacing", choices=("linear", "geometric"), default="geometric")
    p.add_argument("--out", required=True, type=Path)
    p.set_defaults(func=cmd_curves)

    p = sub.add_parser("creep", help="creep compliance C(t) from a model")
    p.add_argument("--model", required=True, type=Path)
    p.add_argument("--t-min", type=_positive, default=0.01)
    p.add_argument("--t-max", type=_positive, default=10.0)
    p.add_argument("--points", type=int, default=200)
    p.add_argument("--spacing", choices=("linear", "geometric"), default="linear")
    p.add_argument("--check-points", type=int, default=1000,
                   help="uniform grid size for the time-domain cross-check (0 disables it)")
    p.add_argument("--tol-quad", type=_positive, default=1e-9)
    p.add_argument("--out", required=True, type=Path)
    p.set_defaults(func=cmd_creep)

    p = sub.add_parser("classify", help="regime of a model or of creep data")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--model", type=Path)
    src.add_argument("--creep", type=Path)
    p.add_argument("--rho", type=_positive, default=1.0, help="density used with --creep")
    p.add_argument("--tol-c0", type=_positive, default=1e-6)
    p.add_argument("--out", type=Path)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("fit-exponent", help="high-frequency attenuation exponent")
    p.add_argument("--model", required=True, type=Path)
    p.add_argument("--omega-min", type=_positive)
    p.add_argument("--omega-max", type=_positive)
    p.add_argument("--points", type=int, default=32)
    p.add_argument("--out", type=Path)
    p.set_defaults(func=cmd_fit_exponent)

    p = sub.add_parser("green", help="Green's function snapshot or seismogram")
    p.add_argument("--model", required=True, type=Path)
    p.add_argument("--at-t", type=float, help="snapshot time")
    p.add_argument("--at-x", type=float, help="receiver position")
    p.add_argument("--x-min", type=float, default=-2.0)
    p.add_argument("--x-max", type=float, default=2.0)
    p.add_argument("--t-min", type=float, default=0.05)
    p.add_argument("--t-max", type=float, default=3.0)
    p.add_argument("--points", type=int, default=41)
    p.add_argument("--spacing", choices=("linear", "geometric"), default="linear")
    p.add_argument("--shift-factor", type=_positive, default=1.0)
    p.add_argument("--tol-tail", type=_positive, default=1e-10)
    p.add_argument("--out", required=True, type=Path)
    p.set_defaults(func=cmd_green)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ViscoWaveError as exc:
        print(f"viscowave {args.command}: {type(exc).__name__}: {exc}", file=sys.stderr)
        return exc.exit_code
    except OSError as exc:
        print(f"viscowave {args.command}: cannot access file: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
