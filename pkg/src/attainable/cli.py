"""Command-line entry point: ``attainable gen|simulate|linear|closure|faces``.

Every command is deterministic given its flags and ``--seed``. Defaults for
any flag can also come from a JSON file passed with ``--config``; explicit
flags win over the file.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import io
from .closure import ClosureParams, closure_experiment
from .errors import AttainableError
from .faces import (
    DEFAULT_DEADBAND,
    DEFAULT_START,
    DEFAULT_STRIDE,
    render_sign_grid,
    sign_grid_pairs,
    sign_grid_triples,
    write_grid_csv,
)
from .generate import random_linear_network, random_network
from .hull import DEFAULT_TOL, make_chart
from .integrate import IntegratorConfig, integrate
from .linear import monomial_factorization, solve_linear, steady_state
from .network import linkage_and_reversibility, orthonormal_span, stoichiometry_subspace


def _floats(text: str) -> list[float]:
    try:
        return [float(v) for v in text.replace(",", " ").split()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def _load_system(args) -> io.System:
    if args.fixture:
        return io.load_fixture(args.fixture)
    if not args.input:
        raise ValueError("give an input file or --fixture NAME")
    return io.read_system(args.input)


def _start_point(args, system: io.System) -> np.ndarray:
    if args.x0 is not None:
        x0 = np.asarray(args.x0, dtype=float)
    elif system.x0 is not None:
        x0 = system.x0
    else:
        raise ValueError("no start point: pass --x0 or use an input that defines x0")
    if x0.shape != (system.field.species_count,):
        raise ValueError(f"--x0 needs {system.field.species_count} values, got {x0.size}")
    return x0


def _conservation_residual(field, x0, points) -> float:
    """Largest drift of ``points - x0`` out of the span of the field's coefficient vectors."""
    span = orthonormal_span(field.coefficient_matrix, 1e-10, field.species_count)
    diff = points - x0
    return float(np.linalg.norm(diff - diff @ span.T @ span, axis=1).max(initial=0.0))


def _fmt(v) -> str:
    return "(" + ", ".join(f"{x:.10g}" for x in np.ravel(v)) + ")"


# -- commands -----------------------------------------------------------------


def cmd_gen(args) -> int:
    if args.linear:
        net = random_linear_network(args.species, (args.rate_lo, args.rate_hi), args.seed)
    else:
        net = random_network(args.species, args.complexes, args.degree, (args.rate_lo, args.rate_hi), args.seed)
    classes, reversible = linkage_and_reversibility(net)
    if args.out:
        io.write_network(net, args.out)
    else:
        sys.stdout.write(json.dumps(io.network_to_json(net), indent=2) + "\n")
    print(
        f"species={net.species_count} complexes={net.complex_count} edges={len(net.edges)} "
        f"linkage_classes={classes} weakly_reversible={str(reversible).lower()} "
        f"stoichiometric_dim={stoichiometry_subspace(net).dim}",
        file=sys.stderr if not args.out else sys.stdout,
    )
    return 0


def cmd_simulate(args) -> int:
    system = _load_system(args)
    x0 = _start_point(args, system)
    cfg = IntegratorConfig(
        h=args.h, max_time=args.max_time, max_points=args.max_points, steady_tol=args.tol or 1e-9
    )
    traj = integrate(system.field, x0, cfg)
    if args.out:
        io.write_trajectory(traj, args.out)
    state = "steady state" if traj.reached_steady else "final point (no steady state reached)"
    print(f"points={len(traj)} t_end={traj.times[-1]:.6g}")
    print(f"{state}: {_fmt(traj.final)}")
    print(f"conservation residual: {_conservation_residual(system.field, x0, traj.points):.3e}")
    return 0


def cmd_linear(args) -> int:
    system = _load_system(args)
    if system.network is not None and not np.array_equal(system.network.Y, np.eye(system.field.species_count)):
        raise ValueError("linear analysis needs complexes X1..Xs in order (Y = identity)")
    if not system.field.is_linear():
        raise ValueError("the vector field is not linear")
    A = system.field.linear_matrix()
    x0 = _start_point(args, system)
    sol = solve_linear(A, x0)
    print("eigenvalues:", _fmt(sol.exponents.real) if np.allclose(sol.exponents.imag, 0) else sol.exponents)
    for coef, lam in sol.terms:
        c = coef.real if np.allclose(coef.imag, 0) else coef
        print(f"  exp({lam.real:.10g}{'' if abs(lam.imag) < 1e-12 else f'{lam.imag:+.10g}i'} t): {_fmt(c)}")
    print("steady state:", _fmt(steady_state(sol)))
    try:
        fact = monomial_factorization(sol, tol_rational=args.tol or 1e-9)
    except AttainableError as exc:
        print(f"monomial factorization: {type(exc).__name__}: {exc}")
    else:
        print("monomial factorization: a =", "(" + ", ".join(str(q) for q in fact.exponents) + ")")
        print(f"  max residual: {fact.max_residual:.3e}")
    return 0


def cmd_closure(args) -> int:
    if args.assert_linear and not args.linear:
        raise ValueError("--assert-linear only applies to linear corpora (--linear)")
    params = ClosureParams(
        species=args.species,
        complexes=args.species if args.linear else args.complexes,
        max_degree=1 if args.linear else args.degree,
        rate_range=(args.rate_lo, args.rate_hi),
        linear=args.linear,
        x0_range=(args.x0_lo, args.x0_hi),
        integrator=IntegratorConfig(h=args.h, max_time=args.max_time, max_points=args.max_points),
        spacing=args.spacing,
        tol=args.tol or DEFAULT_TOL,
        inner_trials=args.inner,
    )
    report = closure_experiment(params, args.trials, args.seed, jobs=args.jobs)
    text = report.to_json()
    if args.out:
        Path(args.out).write_text(text)
    counts = report.status_counts()
    total = len(report.violations)
    confirmed = counts["confirmed-outlier"]
    print(f"trials={report.trials} errors={len(report.errors)} raw_violations={total}")
    for status, n in counts.items():
        print(f"  {status}: {n}")
    rate = confirmed / total if total else 0.0
    print(f"confirmed-outlier rate: {rate:.4f}")
    bad_trials = sorted({v.trial for v in report.confirmed_outliers})
    for k in bad_trials:
        print(f"  outlier trial {k}: seed {report.seeds[k]}")
    if report.multistationary_trials:
        print("trials with several steady states:", report.multistationary_trials)
    if args.assert_linear and confirmed:
        print("assertion failed: confirmed outliers in a linear corpus", file=sys.stderr)
        return 1
    return 0


def _slice_indices(lo: int, hi: int, count: int) -> list[int]:
    return sorted({int(round(v)) for v in np.linspace(lo, hi, count + 2)[1:-1]})


def cmd_faces(args) -> int:
    out = Path(args.out or ".")
    out.mkdir(parents=True, exist_ok=True)
    if args.trajectory:
        traj = io.read_trajectory(args.trajectory)
        x0 = traj.start
        chart = make_chart(traj, x0)
        name = Path(args.trajectory).stem
    else:
        system = _load_system(args)
        x0 = _start_point(args, system)
        grid_points = args.points or 2000
        n = args.stride * grid_points + 1
        traj = integrate(system.field, x0, IntegratorConfig(h=args.h, max_time=n * args.h * 1.5, max_points=n))
        chart = make_chart(system.network if system.network else traj, x0)
        name = system.name or "faces"
    deadband = args.deadband if args.deadband is not None else (args.tol or DEFAULT_DEADBAND)
    d = chart.dim
    last = (len(traj) - 1) // args.stride
    if d in (3, 4):
        stop = min(last, args.points) if args.points else last
        grid = sign_grid_pairs(traj, chart, args.stride, deadband, DEFAULT_START, stop, pin_x0=args.pin_x0)
        paths = [render_sign_grid(grid, out / f"{name}_pairs.ppm", scale=args.scale)]
    elif d == 5:
        stop = min(last, args.points or 200)
        grid = sign_grid_triples(traj, chart, args.stride, deadband, DEFAULT_START, stop)
        lo, hi = grid.index_range
        ks = args.slices or _slice_indices(lo, hi, 3)
        paths = [render_sign_grid(grid, out / f"{name}_k{k}.ppm", slice_index=k, scale=args.scale) for k in ks]
    else:
        sign_grid_pairs(traj, chart)  # raises WrongDimension with guidance
        return 1
    if args.csv:
        paths.append(write_grid_csv(grid, out / f"{name}_grid.csv"))
    pos, neg = int((grid.signs > 0).sum()), int((grid.signs < 0).sum())
    print(f"hull dimension {d}; arity {grid.arity}; indices {grid.index_range[0]}..{grid.index_range[1]} stride {grid.stride}")
    print(f"signs: positive={pos} negative={neg} zero={grid.signs.size - pos - neg}")
    for p in paths:
        print("wrote", p)
    return 0


# -- parser -------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0, help="random seed (default 0)")
    common.add_argument("--out", "-o", help="output file (or directory for faces)")
    common.add_argument("--jobs", type=int, default=1, help="worker processes for experiments")
    common.add_argument(
        "--tol",
        type=float,
        default=None,
        help="command tolerance: steady-state test (simulate), rational recognition (linear), "
        "hull membership (closure), sign deadband (faces)",
    )
    common.add_argument("--config", help="JSON file with default values for this command's flags")

    source = argparse.ArgumentParser(add_help=False)
    source.add_argument("input", nargs="?", help="network or vector-field JSON")
    source.add_argument("--fixture", help="bundled fixture name, e.g. quad_pair")
    source.add_argument("--x0", type=_floats, help="start point, comma separated")

    integ = argparse.ArgumentParser(add_help=False)
    integ.add_argument("--h", type=float, default=1e-3, help="RK4 step size")

    p = argparse.ArgumentParser(prog="attainable", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", parents=[common], help="generate a random weakly reversible network")
    g.add_argument("-s", "--species", type=int, default=3)
    g.add_argument("-n", "--complexes", type=int, default=3)
    g.add_argument("-d", "--degree", type=int, default=2, help="maximum complex degree")
    g.add_argument("--rate-lo", type=float, default=1.0)
    g.add_argument("--rate-hi", type=float, default=10.0)
    g.add_argument("--linear", action="store_true", help="complexes are the single species")
    g.set_defaults(func=cmd_gen)

    s = sub.add_parser("simulate", parents=[common, source, integ], help="integrate to steady state")
    s.add_argument("--max-time", type=float, default=10.0)
    s.add_argument("--max-points", type=int, default=10_000)
    s.set_defaults(func=cmd_simulate)

    li = sub.add_parser("linear", parents=[common, source], help="closed-form analysis of a linear network")
    li.set_defaults(func=cmd_linear)

    c = sub.add_parser("closure", parents=[common, integ], help="forward-closure experiment")
    c.add_argument("-s", "--species", type=int, default=3)
    c.add_argument("-n", "--complexes", type=int, default=3)
    c.add_argument("-d", "--degree", type=int, default=2)
    c.add_argument("--linear", action="store_true")
    c.add_argument("--trials", type=int, default=20)
    c.add_argument("--inner", type=int, default=5, help="restarts per trial")
    c.add_argument("--spacing", type=float, default=1 / 200, help="thinning distance relative to hull diameter")
    c.add_argument("--rate-lo", type=float, default=1.0)
    c.add_argument("--rate-hi", type=float, default=10.0)
    c.add_argument("--x0-lo", type=float, default=0.5)
    c.add_argument("--x0-hi", type=float, default=2.0)
    c.add_argument("--max-time", type=float, default=60.0)
    c.add_argument("--max-points", type=int, default=60_001)
    c.add_argument("--assert-linear", action="store_true", help="exit 1 on confirmed outliers")
    c.set_defaults(func=cmd_closure)

    f = sub.add_parser("faces", parents=[common, source, integ], help="face-matrix sign grids")
    f.add_argument("--trajectory", help="trajectory CSV with tangents instead of a system")
    f.add_argument("--stride", type=int, default=DEFAULT_STRIDE)
    f.add_argument("--points", type=int, default=None, help="last grid index (2000 for pairs, 200 for triples)")
    f.add_argument("--deadband", type=float, default=None)
    f.add_argument("--pin-x0", action="store_true", help="use the start point as a boundary vertex (d = 4)")
    f.add_argument("--slices", type=int, nargs="*", help="k indices to render for triple grids")
    f.add_argument("--scale", type=int, default=1, help="pixel magnification")
    f.add_argument("--csv", action="store_true", help="also dump grid values as CSV")
    f.set_defaults(func=cmd_faces)
    p._subcommands = sub.choices  # type: ignore[attr-defined]
    return p


def parse_args(argv=None) -> argparse.Namespace:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.config:
        try:
            defaults = json.loads(Path(args.config).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            parser.error(f"cannot read config {args.config}: {exc}")
        sub = parser._subcommands[args.command]  # type: ignore[attr-defined]
        known = {a.dest for a in sub._actions}
        unknown = set(defaults) - known
        if unknown:
            parser.error(f"unknown keys in {args.config}: {', '.join(sorted(unknown))}")
        sub.set_defaults(**defaults)
        args = parser.parse_args(argv)
    return args


def main(argv=None) -> int:
    args = parse_args(argv)
    try:
        return args.func(args)
    except (AttainableError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
