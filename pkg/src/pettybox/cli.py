"""Command-line surface.

Subcommands load set description files, run verification campaigns, and
emit JSON or CSV with the resolved run configuration and toolkit version
embedded, so identical configurations reproduce byte-identical outputs.

Exit codes: 0 all checks passed, 1 a step/convergence budget ran out or
a checked bound failed, 2 invalid input, 3 numerical failure (including
direction-resampling exhaustion).
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import asdict, dataclass

import numpy as np

from . import __version__
from .corpus import random_polygon, random_sl2
from .driver import DirectionPolicy, run_symmetrization
from .errors import (BudgetError, ConditionViolationError, InputError,
                     NumericalError)
from .geometry import SphericalGrid, circle_grid, sphere_grid
from .projection import (affine_image_check, petty_product,
                         polar_steiner_inclusion_check)
from .sets import (BoxUnion, coarea_check, load_set_file, steiner_symmetrize,
                   vertical_boundary_measure)

DEFAULT_TOL = 1e-9


@dataclass(frozen=True)
class RunConfig:
    """Resolved parameters of one invocation, embedded in every output."""

    command: str
    input: str | None = None
    out: str | None = None
    seed: int | None = None
    grid_n: int | None = None
    tol: float = DEFAULT_TOL
    count: int | None = None
    trials: int | None = None
    direction: str | None = None
    policy: str | None = None
    candidates: int | None = None
    max_steps: int | None = None
    stop_tol: float | None = None
    exploratory: bool = False

    def to_json(self) -> dict:
        return {k: v for k, v in asdict(self).items()
                if v is not None and (k != "exploratory" or v)}


def _emit(text: str, out: str | None) -> None:
    sys.stdout.write(text)
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)


def _json_report(payload: dict, config: RunConfig) -> str:
    doc = {"version": __version__, "config": config.to_json()}
    doc.update(payload)
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


def _csv_comments(config: RunConfig) -> list[str]:
    return [f"version: {__version__}",
            "config: " + json.dumps(config.to_json(), sort_keys=True)]


def _csv(header: list[str], rows: list[list[str]], config: RunConfig) -> str:
    lines = [f"# {c}" for c in _csv_comments(config)]
    lines.append(",".join(header))
    lines.extend(",".join(r) for r in rows)
    return "\n".join(lines) + "\n"


def _fmt(x: float) -> str:
    return f"{x:.17g}"


def _parse_direction(text: str, dim: int) -> np.ndarray:
    try:
        parts = np.asarray([float(p) for p in text.split(",")])
    except ValueError as exc:
        raise InputError(f"direction {text!r} is not a comma-separated vector") from exc
    if parts.shape != (dim,):
        raise InputError(f"direction needs {dim} components, got {parts.shape[0]}")
    norm = float(np.linalg.norm(parts))
    if norm <= 0.0:
        raise InputError("direction must be nonzero")
    return parts / norm


def _grid_for(dim: int, grid_n: int | None) -> SphericalGrid | None:
    if grid_n is None:
        return None
    if dim == 2:
        return circle_grid(grid_n)
    return sphere_grid(grid_n, 2 * grid_n)


def _cmd_petty(args) -> int:
    E = load_set_file(args.input)
    config = RunConfig(command="petty", input=args.input, out=args.out,
                       grid_n=args.grid_n, tol=args.tol)
    report = petty_product(E, _grid_for(E.dim, args.grid_n))
    _emit(_json_report(report.to_json(), config), args.out)
    return 0 if report.slack >= -args.tol else 1


def _monotonicity_row(E, u, set_id: int, resamples: int, exploratory: bool,
                      rows: list[list[str]]) -> float:
    before = petty_product(E).product
    after = petty_product(steiner_symmetrize(E, u)).product
    margin = after - before
    rows.append([str(set_id)] + [_fmt(c) for c in u]
                + [_fmt(before), _fmt(after), _fmt(margin), str(resamples),
                   "1" if exploratory else "0"])
    return margin


def _cmd_monotonicity(args) -> int:
    if (args.input is None) == (args.count is None):
        raise InputError("pass exactly one of --input (single set) or "
                         "--count (random campaign)")
    rows: list[list[str]] = []
    worst = np.inf
    dim = 2
    if args.input is not None:
        E = load_set_file(args.input)
        dim = E.dim
        if args.direction is None:
            raise InputError("--direction is required with --input")
        u = _parse_direction(args.direction, dim)
        mass = vertical_boundary_measure(E, u)
        exploratory = mass > 0.0 or isinstance(E, BoxUnion)
        if exploratory and not args.exploratory:
            raise ConditionViolationError(
                f"boundary mass {mass:.17g} orthogonal to the direction puts "
                "this run outside the monotonicity hypothesis; pass "
                "--exploratory to record it anyway", mass)
        margin = _monotonicity_row(E, u, 0, 0, exploratory, rows)
        if not exploratory:
            worst = margin
    else:
        if args.seed is None:
            raise InputError("--seed is required for a random campaign")
        for i in range(args.count):
            E = random_polygon(args.seed, i)
            rng = np.random.default_rng((args.seed, i, 1))
            resamples = 0
            while True:
                a = rng.uniform(0.0, 2.0 * np.pi)
                u = np.array([np.cos(a), np.sin(a)])
                if vertical_boundary_measure(E, u) == 0.0:
                    break
                resamples += 1
                if resamples > 10_000:
                    raise NumericalError(
                        f"set {i}: could not sample a direction meeting the "
                        "monotonicity hypothesis")
            margin = _monotonicity_row(E, u, i, resamples, False, rows)
            worst = min(worst, margin)
    config = RunConfig(command="monotonicity", input=args.input, out=args.out,
                       seed=args.seed, tol=args.tol, count=args.count,
                       direction=args.direction, exploratory=args.exploratory)
    header = ["set_id"] + [f"u_{k + 1}" for k in range(dim)] + [
        "product_before", "product_after", "margin", "resamples", "exploratory"]
    _emit(_csv(header, rows, config), args.out)
    return 0 if (worst is np.inf or worst >= -args.tol) else 1


def _cmd_converge(args) -> int:
    E = load_set_file(args.input)
    policy = DirectionPolicy(kind=args.policy, seed=args.seed,
                             candidates=args.candidates)
    config = RunConfig(command="converge", input=args.input, out=args.out,
                       seed=args.seed, policy=args.policy,
                       candidates=args.candidates, max_steps=args.max_steps,
                       stop_tol=args.stop_tol)
    trace = run_symmetrization(E, policy, max_steps=args.max_steps,
                               stop_tol=args.stop_tol)
    _emit(trace.to_csv(comments=_csv_comments(config)), args.out)
    return 0 if trace.converged else 1


def _cmd_affine(args) -> int:
    E = load_set_file(args.input)
    if E.dim != 2:
        raise InputError("the equivariance check is a planar computation")
    if args.seed is None:
        raise InputError("--seed is required for a random campaign")
    grid = _grid_for(2, args.grid_n)
    base_product = petty_product(E).product
    rows: list[list[str]] = []
    worst = 0.0
    for t in range(args.trials):
        A = random_sl2(args.seed, t)
        disc = affine_image_check(E, A, grid)
        mapped = petty_product(E.transform(A)).product
        rel = abs(mapped - base_product) / base_product
        rows.append([str(t), _fmt(A[0, 0]), _fmt(A[0, 1]), _fmt(A[1, 0]),
                     _fmt(A[1, 1]), _fmt(disc), _fmt(rel)])
        worst = max(worst, disc)
    config = RunConfig(command="affine", input=args.input, out=args.out,
                       seed=args.seed, grid_n=args.grid_n, tol=args.tol,
                       trials=args.trials)
    header = ["trial", "a11", "a12", "a21", "a22", "discrepancy",
              "product_rel_diff"]
    _emit(_csv(header, rows, config), args.out)
    return 0 if worst <= args.tol else 1


def _cmd_coarea(args) -> int:
    E = load_set_file(args.input)
    cut = float(E.centroid()[0])
    fields = [
        ("one", lambda p: np.ones(len(p)), ()),
        ("x_squared", lambda p: p[:, 0] ** 2, ()),
        ("halfplane", lambda p: (p[:, 0] >= cut).astype(float), (cut,)),
    ]
    rows = []
    ok = True
    for name, g, breaks in fields:
        lhs, rhs = coarea_check(E, g, breakpoints=breaks)
        diff = abs(lhs - rhs)
        ok = ok and diff <= args.tol * (1.0 + abs(lhs))
        rows.append([name, _fmt(lhs), _fmt(rhs), _fmt(diff)])
    config = RunConfig(command="coarea-check", input=args.input, out=args.out,
                       tol=args.tol)
    _emit(_csv(["field", "lhs", "rhs", "abs_diff"], rows, config), args.out)
    return 0 if ok else 1


def _cmd_polar_symmetral(args) -> int:
    E = load_set_file(args.input)
    u = _parse_direction(args.direction, E.dim)
    grid = _grid_for(E.dim, args.grid_n)
    holds, margin = polar_steiner_inclusion_check(E, u, grid,
                                                  factor_tol=args.tol)
    config = RunConfig(command="polar-symmetral-check", input=args.input,
                       out=args.out, grid_n=args.grid_n, tol=args.tol,
                       direction=args.direction)
    _emit(_json_report({"holds": holds, "margin": margin,
                        "direction": [float(c) for c in u]}, config), args.out)
    return 0 if holds else 1


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pettybox",
        description="Projection bodies, symmetrization, and the sharp "
                    "product bound for polygons and box-unions.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, grid=False):
        p.add_argument("--input", required=False,
                       help="set description file (JSON)")
        p.add_argument("--out", help="also write the report to this file")
        p.add_argument("--tol", type=float, default=DEFAULT_TOL,
                       help="pass/fail tolerance (default 1e-9)")
        if grid:
            p.add_argument("--grid-n", type=int, default=None,
                           help="direction-grid size override")

    p = sub.add_parser("petty", help="product-bound report for one set")
    common(p, grid=True)
    p.set_defaults(func=_cmd_petty, needs_input=True)

    p = sub.add_parser("monotonicity",
                       help="product growth under one symmetrization")
    common(p)
    p.add_argument("--direction", help="symmetrization direction 'x,y'")
    p.add_argument("--count", type=int, help="random-campaign corpus size")
    p.add_argument("--seed", type=int, help="campaign seed")
    p.add_argument("--exploratory", action="store_true",
                   help="allow runs outside the monotonicity hypothesis; "
                        "such rows never gate the exit code")
    p.set_defaults(func=_cmd_monotonicity, needs_input=False)

    p = sub.add_parser("converge", help="iterated-symmetrization trace")
    common(p)
    p.add_argument("--policy", default="cap-cover-greedy",
                   choices=["uniform-random", "coordinate-cycle",
                            "cap-cover-greedy"])
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--candidates", type=int, default=32)
    p.add_argument("--max-steps", type=int, default=500)
    p.add_argument("--stop-tol", type=float, default=0.05)
    p.set_defaults(func=_cmd_converge, needs_input=True)

    p = sub.add_parser("affine", help="equivariance under random "
                                      "volume-preserving maps")
    common(p, grid=True)
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--seed", type=int)
    p.set_defaults(func=_cmd_affine, needs_input=True)

    p = sub.add_parser("coarea-check",
                       help="boundary-slicing identity on one polygon")
    common(p)
    p.set_defaults(func=_cmd_coarea, needs_input=True)

    p = sub.add_parser("polar-symmetral-check",
                       help="symmetrized polar body stays inside the polar "
                            "body of the symmetral")
    common(p, grid=True)
    p.add_argument("--direction", default="0,1",
                   help="symmetrization direction (default '0,1')")
    p.set_defaults(func=_cmd_polar_symmetral, needs_input=True)
    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        if args.needs_input and args.input is None:
            raise InputError(f"{args.command} requires --input")
        return args.func(args)
    except BudgetError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except NumericalError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
