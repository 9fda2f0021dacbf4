"""Command-line front end: extract, solve, verify, solve-lame, oracle,
sweep-n, heine-count.

Exit codes: 0 on success, 1 on numeric failure, 2 on invalid input.
Solver parallelism is capped by the LAME_FORGE_THREADS environment
variable (default 1, which keeps output byte-reproducible for a seed).
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import jsonio
from .constraint_extract import (
    ChargeProblem,
    antidifferentiate,
    constraint_level,
    extract,
)
from .electrostatics import SolverOptions, enumerate_equilibria, fit_multiplier, Configuration
from .errors import LameForgeError, NotASolution
from .lame_ops import ParametricLame, classify, OperatorClass, van_vleck_from_solution, \
    scaled_residual_norm
from .oracles import (
    hermite,
    jacobi,
    laguerre,
    relativistic_hermite,
    schrodinger_solution,
)
from .polycore import ComplexPoly, find_roots
from .settings import DEFAULT_SETTINGS
from .stieltjes_solver import heine_count, solve_heine_stieltjes


class InputError(Exception):
    """Bad user input; maps to exit code 2."""


def _load_json(path: str):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}")
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}:{exc.lineno}:{exc.colno}: invalid JSON: {exc.msg}")


def _emit(text: str, output: str | None) -> None:
    if output:
        with open(output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _solver_options(args) -> SolverOptions:
    tol = args.tol
    if not (0.0 < tol < 1e-2):
        raise InputError(f"--tol must lie in (0, 1e-2), got {tol}")
    if not (1 <= args.starts <= 10**5):
        raise InputError(f"--starts must lie in [1, 1e5], got {args.starts}")
    if not (0 <= args.seed < 2**64):
        raise InputError(f"--seed must be a 64-bit unsigned integer, got {args.seed}")
    threads = int(os.environ.get("LAME_FORGE_THREADS", "1") or "1")
    return SolverOptions(tol=tol, max_iter=args.max_iter,
                         random_starts=args.starts, seed=args.seed,
                         threads=max(1, threads))


def _positive_real_zeros(p: ComplexPoly) -> list[float]:
    out = []
    for z in find_roots(p):
        if z.real > 1e-9 and abs(z.imag) <= 1e-9 * (1.0 + abs(z)):
            out.append(z.real)
    return sorted(out)


# ---------------------------------------------------------------------------
# subcommands


def cmd_extract(args) -> int:
    op = jsonio.operator_from_json(_parse_input(_load_json(args.operator)))
    dec = extract(op)
    constraint = antidifferentiate(dec)
    _emit(jsonio.dumps(jsonio.decomposition_to_json(dec, constraint.r)), args.output)
    return 0


def _parse_input(obj):
    if not isinstance(obj, dict):
        raise InputError("top-level JSON must be an object")
    return obj


def cmd_solve(args) -> int:
    problem, constraint = jsonio.problem_from_json(_parse_input(_load_json(args.problem)))
    opts = _solver_options(args)
    solutions, diagnostics = enumerate_equilibria(problem, constraint, opts,
                                                  full_output=True)
    if args.format == "csv":
        _emit(jsonio.solutions_to_csv(solutions), args.output)
    else:
        payload = {
            "problem": jsonio.problem_to_json(problem, constraint),
            "solutions": [jsonio.solution_to_json(s) for s in solutions],
            "diagnostics": diagnostics,
        }
        _emit(jsonio.dumps(payload), args.output)
    if problem.movable_count > 0 and not solutions:
        return 1
    return 0


def cmd_verify(args) -> int:
    op = jsonio.operator_from_json(_parse_input(_load_json(args.operator)))
    y = jsonio.poly_from_json(_parse_input(_load_json(args.solution)))
    dec = extract(op)
    report: dict = {"charges": jsonio.charges_to_json(dec.problem.charges)}
    if y.degree() < 1:
        report.update({"pass": True, "V": jsonio.poly_to_json(ComplexPoly()),
                       "residual": 0.0, "lambda": None, "rho_ode": None,
                       "constraint_level": None, "off_arrangement": True,
                       "detail": "constant solution is trivial"})
        _emit(jsonio.dumps(report), args.output)
        return 0
    pl = ParametricLame(op, dec.D, 0j)
    try:
        v = van_vleck_from_solution(pl, y)
    except LameForgeError as exc:
        report.update({"pass": False, "detail": f"{type(exc).__name__}: {exc}",
                       "residual": None})
        _emit(jsonio.dumps(report), args.output)
        return 1
    zeros = find_roots(y)
    problem = ChargeProblem(dec.problem.charges, len(zeros))
    off = True
    try:
        from .electrostatics import check_off_arrangement

        check_off_arrangement(problem, zeros)
    except LameForgeError:
        off = False
    lam = None
    level = None
    rho_ode = None
    if not dec.r_prime.is_zero():
        constraint = antidifferentiate(dec)
        lam = fit_multiplier(problem, constraint.r, Configuration(tuple(zeros)))
        level = constraint_level(constraint.r, zeros)
        rho_ode = 2.0 * (1.0 + lam)
    report.update({
        "pass": True,
        "V": jsonio.poly_to_json(v),
        "residual": scaled_residual_norm(pl, v, y),
        "lambda": None if lam is None else jsonio._pair(lam),
        "rho_ode": None if rho_ode is None else jsonio._pair(rho_ode),
        "constraint_level": None if level is None else jsonio._pair(level),
        "off_arrangement": off,
    })
    _emit(jsonio.dumps(report), args.output)
    return 0


def cmd_solve_lame(args) -> int:
    op = jsonio.operator_from_json(_parse_input(_load_json(args.operator)))
    opts = _solver_options(args)
    pairs = solve_heine_stieltjes(op, args.n, opts)
    payload = {
        "n": args.n,
        "degenerate": classify(op) is OperatorClass.DEGENERATE,
        "pairs": [jsonio.pair_to_json(p) for p in pairs],
    }
    _emit(jsonio.dumps(payload), args.output)
    return 0


_FAMILIES = {
    "hermite": lambda a: hermite(a.n),
    "laguerre": lambda a: laguerre(a.n, a.alpha),
    "jacobi": lambda a: jacobi(a.n, a.alpha, a.beta),
    "relativistic-hermite": lambda a: relativistic_hermite(a.n, a.N),
    "schrodinger": lambda a: schrodinger_solution(a.m, a.d, a.branch),
}


def cmd_oracle(args) -> int:
    try:
        poly = _FAMILIES[args.family](args)
    except (ValueError, LameForgeError) as exc:
        raise InputError(str(exc))
    zeros = find_roots(poly) if poly.degree() >= 1 else []
    if args.format == "csv":
        lines = ["k,coeff_re,coeff_im"]
        for k, c in enumerate(poly.coeffs):
            lines.append(f"{k},{c.real!r},{c.imag!r}")
        lines.append("k,zero_re,zero_im")
        for k, z in enumerate(zeros):
            lines.append(f"{k},{z.real!r},{z.imag!r}")
        _emit("\n".join(lines) + "\n", args.output)
    else:
        payload = {
            "family": args.family,
            "params": {k: getattr(args, k) for k in
                       ("n", "alpha", "beta", "N", "m", "d", "branch")
                       if getattr(args, k, None) is not None},
            "coeffs": jsonio.poly_to_json(poly)["coeffs"],
            "zeros": [jsonio._pair(z) for z in zeros],
        }
        _emit(jsonio.dumps(payload), args.output)
    return 0


def _parse_grid(spec: str) -> list[float]:
    spec = spec.strip()
    if not spec:
        return []
    if ":" in spec:
        start, stop, factor = spec.split(":")
        start, stop, factor = float(start), float(stop), float(factor)
        if start <= 0 or factor <= 1:
            raise InputError("geometric grid needs start > 0 and factor > 1")
        out = []
        v = start
        while v <= stop * (1 + 1e-12):
            out.append(v)
            v *= factor
        return out
    return [float(tok) for tok in spec.split(",") if tok]


def cmd_sweep_n(args) -> int:
    if args.n < 2:
        raise InputError("--n must be >= 2")
    grid = _parse_grid(args.grid)
    if any(b <= a for a, b in zip(grid, grid[1:])) or any(v <= 0 for v in grid):
        raise InputError("grid must be positive and increasing")
    reference = _positive_real_zeros(hermite(args.n))
    header = ["N"] + [f"zero{k+1}" for k in range(len(reference))]
    rows = []
    for big_n in grid:
        zeros = _positive_real_zeros(relativistic_hermite(args.n, big_n))
        rows.append([big_n] + zeros)
    if grid:
        rows.append([float("inf")] + reference)
    _emit(jsonio.plotdata(header, rows), args.output)
    return 0


def cmd_heine_count(args) -> int:
    try:
        count = heine_count(args.n, args.p)
    except ValueError as exc:
        raise InputError(str(exc))
    _emit(jsonio.dumps({"n": args.n, "p": args.p, "count": count}), args.output)
    return 0


# ---------------------------------------------------------------------------
# argument parsing


def _add_solver_flags(sp):
    sp.add_argument("--tol", type=float, default=1e-11)
    sp.add_argument("--max-iter", type=int, default=200)
    sp.add_argument("--starts", type=int, default=32)
    sp.add_argument("--seed", type=int, default=42)


def _add_io_flags(sp):
    sp.add_argument("--format", choices=("json", "csv", "plotdata"), default="json")
    sp.add_argument("--output", default=None)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lame-forge",
        description="Electrostatic equilibria and degenerate Lame equations",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("extract", help="operator -> charges + constraint")
    sp.add_argument("operator")
    _add_io_flags(sp)
    sp.set_defaults(func=cmd_extract)

    sp = sub.add_parser("solve", help="enumerate equilibria of a charge problem")
    sp.add_argument("problem")
    _add_solver_flags(sp)
    _add_io_flags(sp)
    sp.set_defaults(func=cmd_solve)

    sp = sub.add_parser("verify", help="round-trip report for (operator, y)")
    sp.add_argument("operator")
    sp.add_argument("solution")
    _add_io_flags(sp)
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("solve-lame", help="Van Vleck / Stieltjes pairs")
    sp.add_argument("operator")
    sp.add_argument("--n", type=int, required=True)
    _add_solver_flags(sp)
    _add_io_flags(sp)
    sp.set_defaults(func=cmd_solve_lame)

    sp = sub.add_parser("oracle", help="emit a polynomial family member")
    sp.add_argument("--family", choices=sorted(_FAMILIES), required=True)
    sp.add_argument("--n", type=int, default=None)
    sp.add_argument("--alpha", type=float, default=0.0)
    sp.add_argument("--beta", type=float, default=0.0)
    sp.add_argument("--N", type=float, default=None)
    sp.add_argument("--m", type=int, default=None)
    sp.add_argument("--d", type=int, default=None)
    sp.add_argument("--branch", choices=("even", "odd"), default=None)
    _add_io_flags(sp)
    sp.set_defaults(func=cmd_oracle)

    sp = sub.add_parser("sweep-n", help="positive zeros of H_n^N over an N grid")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--grid", default="1:16384:2",
                    help="start:stop:factor (geometric) or comma-separated values")
    _add_io_flags(sp)
    sp.set_defaults(func=cmd_sweep_n)

    sp = sub.add_parser("heine-count", help="binom(n+p-1, n)")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--p", type=int, required=True)
    _add_io_flags(sp)
    sp.set_defaults(func=cmd_heine_count)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except InputError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return 2
    except LameForgeError as exc:
        print(f"numeric failure: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
