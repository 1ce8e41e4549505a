"""Command line front end.

Subcommands: solve-anomaly, propagate, map, verify, degeneration-sweep.
Exit codes are 0 on success, 1 when a verification suite fails, 2 on usage
or domain errors.  Vectors are comma-separated triples; all floating output
is shortest-round-trip decimal except the propagation CSV, which uses 17
significant digits so every field reparses exactly.
"""

from __future__ import annotations

import argparse
import json
import math
import sys

import numpy as np

from . import negative, positive, zero
from .anomalies import solve_for_class
from .errors import KeplerRegError, UnknownSuite
from .geometry import mink_inner
from .kepler import EnergyClass, PhaseState, classify, elements_from_state, energies, first_integrals
from .verify.integrate import anomaly_propagate, integrate_kepler, orbit_plane_basis
from .verify.suites import run_suite, suite_names

_REGIMES = {
    "elliptic": EnergyClass.ELLIPTIC,
    "hyperbolic": EnergyClass.HYPERBOLIC,
    "parabolic": EnergyClass.PARABOLIC,
}


def _vector(text: str) -> np.ndarray:
    parts = text.split(",")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError(f"expected three comma-separated numbers, got {text!r}")
    values = np.array([float(p) for p in parts])
    if not np.all(np.isfinite(values)):
        raise argparse.ArgumentTypeError("vector components must be finite")
    return values


def _float_list(text: str) -> list:
    if text.strip() == "":
        return []
    return [float(p) for p in text.split(",")]


def _emit(args, text: str):
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _fmt17(value: float) -> str:
    return format(float(value), ".17g")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="keplerreg",
        description="Kepler-problem regularizing maps, anomaly solvers and certification suites",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_solve = sub.add_parser("solve-anomaly", help="solve a Kepler equation")
    p_solve.add_argument("--regime", required=True, choices=sorted(_REGIMES))
    p_solve.add_argument("--e", type=float, default=0.0)
    p_solve.add_argument("--mean", type=float, required=True)
    p_solve.add_argument("--output")

    p_prop = sub.add_parser("propagate", help="propagate an orbit to CSV")
    p_prop.add_argument("--q", type=_vector, required=True)
    p_prop.add_argument("--p", type=_vector, required=True)
    p_prop.add_argument("--t-final", type=float, required=True)
    p_prop.add_argument("--n-out", type=int, default=100)
    p_prop.add_argument("--method", choices=("rk", "anomaly"), default="rk")
    p_prop.add_argument("--tol", type=float, default=1e-12)
    p_prop.add_argument("--output")

    p_map = sub.add_parser("map", help="apply the regularizing map for the state's regime")
    p_map.add_argument("--q", type=_vector, required=True)
    p_map.add_argument("--p", type=_vector, required=True)
    p_map.add_argument("--output")

    p_verify = sub.add_parser("verify", help="run a certification suite")
    p_verify.add_argument("--suite", required=True)
    p_verify.add_argument("--seed", type=int, default=0)
    p_verify.add_argument("--samples", type=int, default=1000)
    p_verify.add_argument("--tol", type=float, default=1e-12)
    p_verify.add_argument("--output")

    p_sweep = sub.add_parser(
        "degeneration-sweep",
        help="distance of the positive-energy map to its zero-energy limit",
    )
    p_sweep.add_argument("--q", type=_vector, required=True)
    p_sweep.add_argument("--p", type=_vector, required=True)
    p_sweep.add_argument("--h-values", type=_float_list, default=[])
    p_sweep.add_argument("--output")
    return parser


def cmd_solve_anomaly(args) -> int:
    regime = _REGIMES[args.regime]
    if regime is EnergyClass.ELLIPTIC and not 0.0 <= args.e < 1.0:
        raise KeplerRegError(f"elliptic regime needs 0 <= e < 1, got {args.e!r}")
    if regime is EnergyClass.HYPERBOLIC and not args.e > 1.0:
        raise KeplerRegError(f"hyperbolic regime needs e > 1, got {args.e!r}")
    result = solve_for_class(regime, args.mean, args.e)
    payload = {
        "psi": result.psi,
        "residual": result.residual,
        "iterations": result.iterations,
    }
    _emit(args, json.dumps(payload) + "\n")
    return 0


_CSV_HEADER = "t,q1,q2,q3,p1,p2,p3,H,L1,L2,L3,A1,A2,A3"


def cmd_propagate(args) -> int:
    state = PhaseState(q=args.q, p=args.p)
    times = np.linspace(0.0, args.t_final, args.n_out)
    if args.method == "rk":
        orbit = integrate_kepler(state, args.t_final, tol=args.tol, sample_times=times)
        states = orbit.states
    else:
        elements = elements_from_state(state)
        basis = orbit_plane_basis(state)
        states = [anomaly_propagate(elements, basis, t) for t in times]
    lines = [_CSV_HEADER]
    for t, s in zip(times, states):
        ints = first_integrals(s)
        row = [t, *s.q, *s.p, ints.h, *ints.angular_momentum, *ints.lrl]
        lines.append(",".join(_fmt17(v) for v in row))
    _emit(args, "\n".join(lines) + "\n")
    return 0


def cmd_map(args) -> int:
    state = PhaseState(q=args.q, p=args.p)
    klass = classify(state)
    h = energies(state).h
    if klass is EnergyClass.ELLIPTIC:
        xy = negative.ligon_schaaf(state)
        x, y = xy.x, xy.y
        regime = "negative"
        residuals = {
            "unit_x": abs(float(np.linalg.norm(x)) - 1.0),
            "orthogonality": abs(float(x @ y)),
        }
        integrals = {
            "angular_momentum": list(np.cross(x[1:], y[1:])),
            "lrl": list(x[1:] * y[0] - x[0] * y[1:]),
        }
        h_rec = -1.0 / (2.0 * float(y @ y))
    elif klass is EnergyClass.HYPERBOLIC:
        xy = positive.ligon_schaaf(state)
        x, y = xy.x, xy.y
        regime = "positive"
        residuals = {
            "unit_x": abs(mink_inner(x, x) - 1.0),
            "orthogonality": abs(mink_inner(x, y)),
        }
        integrals = {
            "angular_momentum": list(np.cross(y[1:], x[1:])),
            "lrl": list(x[1:] * y[0] - x[0] * y[1:]),
        }
        h_rec = 1.0 / (2.0 * -mink_inner(y, y))
    else:
        pt = zero.line_inverse(state)
        x, y = pt.x, pt.y
        regime = "zero"
        residuals = {"shell_k0": abs(energies(state).k_zero)}
        integrals = {
            "angular_momentum": list(np.cross(x, y)),
            "lrl": list(y),
        }
        # K0 o chart = 2|y| - 2 recovers the energy through H = K0 / (2|q|).
        h_rec = (2.0 * float(np.linalg.norm(y)) - 2.0) / (2.0 * state.r)
    payload = {
        "regime": regime,
        "x": list(x),
        "y": list(y),
        "constraint_residuals": residuals,
        "transformed_integrals": integrals,
        "H_reconstructed": h_rec,
    }
    _emit(args, json.dumps(payload) + "\n")
    return 0


def cmd_verify(args) -> int:
    try:
        report = run_suite(args.suite, seed=args.seed, samples=args.samples, tol=args.tol)
    except UnknownSuite as exc:
        raise KeplerRegError(f"{exc}; available: {', '.join(suite_names())}") from exc
    _emit(args, report.to_json() + "\n")
    return 0 if report.passed else 1


def cmd_degeneration_sweep(args) -> int:
    state = PhaseState(q=args.q, p=args.p)
    k0 = energies(state).k_zero
    if abs(k0) > zero.SHELL_TOL:
        raise KeplerRegError(f"base state must have K0 = 0, got {k0!r}")
    header = "h,x0,x1,x2,x3,y0,y1,y2,y3,distance_to_limit"
    lines = [header]
    if args.h_values:
        for h in args.h_values:
            if not h > 0.0:
                raise KeplerRegError(f"h values must be positive, got {h!r}")
            stretched = PhaseState(
                q=state.q, p=state.p * math.sqrt(1.0 + h * state.r)
            )
            xy = positive.ligon_schaaf(stretched)
            dist = zero.degeneration_distance(state, h)
            row = [h, *xy.x, *xy.y, dist]
            lines.append(",".join(repr(float(v)) for v in row))
        x0_lim, xbar, y0_lim, ybar = zero.degeneration_limit(state)
        row = [0.0, x0_lim, *xbar, y0_lim, *ybar, 0.0]
        lines.append(",".join(repr(float(v)) for v in row))
    _emit(args, "\n".join(lines) + "\n")
    return 0


_DISPATCH = {
    "solve-anomaly": cmd_solve_anomaly,
    "propagate": cmd_propagate,
    "map": cmd_map,
    "verify": cmd_verify,
    "degeneration-sweep": cmd_degeneration_sweep,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _DISPATCH[args.command](args)
    except KeplerRegError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
