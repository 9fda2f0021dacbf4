"""Van Vleck / Stieltjes pairs for a Lame operator and a target degree.

The primary route goes through electrostatics: extract charges and the
constraint derivative, solve the induced critical system for the zeros,
rebuild the monic solution and recover V by exact division.  Operators
of Fuchs index zero admit an independent banded-recurrence cross-check.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .constraint_extract import ChargeProblem, extract
from .electrostatics import (
    Configuration,
    SolverOptions,
    _off_arrangement,
    _random_configurations,
    solve_bethe_system,
    solve_equilibrium,
    stieltjes_seeds,
)
from .errors import (
    LameForgeError,
    NotFuchs0,
    RecurrenceBreakdown,
)
from .lame_ops import (
    LameOperator,
    OperatorClass,
    ParametricLame,
    classify,
    fuchs_index,
    scaled_residual_norm,
    van_vleck_from_solution,
)
from .polycore import ComplexPoly, poly_from_roots
from .settings import DEFAULT_SETTINGS, NumericSettings

HEINE_COUNT_CAP = 10**6


@dataclass(frozen=True)
class VanVleckPair:
    V: ComplexPoly
    y: ComplexPoly                 # monic, degree n
    lam: complex                   # 0 when unconstrained
    residual: float
    heine_bound: int | None = None


def heine_count(n: int, p: int) -> int:
    """binom(n+p-1, n), the maximal number of Van Vleck polynomials."""
    if n < 0 or p < 1:
        raise ValueError("need n >= 0 and p >= 1")
    count = math.comb(n + p - 1, n)
    if count > HEINE_COUNT_CAP:
        raise ValueError(f"heine count {count} exceeds enumeration cap {HEINE_COUNT_CAP}")
    return count


def solve_fuchs0(op: LameOperator, n: int,
                 settings: NumericSettings = DEFAULT_SETTINGS) -> VanVleckPair:
    """Unique (V, y) for a Fuchs-index-0 operator by coefficient recurrence.

    With y = sum c_k x^k monic of degree n, the x^n coefficient of the
    equation pins the scalar V, and the lower coefficients follow from a
    three-term downward recurrence.  A vanishing leading recurrence
    coefficient (resonance) aborts with RecurrenceBreakdown.
    """
    if fuchs_index(op) != 0:
        raise NotFuchs0(f"Fuchs index is {fuchs_index(op)}, need 0")
    a = list(op.A.coeffs) + [0j] * (3 - len(op.A.coeffs))
    b = list(op.B.coeffs) + [0j] * (2 - len(op.B.coeffs))
    a0, a1, a2 = a[0], a[1], a[2]
    b0, b1 = b[0], b[1]
    if n == 0:
        return VanVleckPair(ComplexPoly(), ComplexPoly((1,)), 0j, 0.0)
    v = -(a2 * n * (n - 1) + 2 * b1 * n)
    c = [0j] * (n + 3)
    c[n] = 1 + 0j
    scale = abs(a2) * n * n + 2 * abs(b1) * n + abs(v) + 1.0
    for k in range(n - 1, -1, -1):
        mu = a2 * k * (k - 1) + 2 * b1 * k + v
        rhs = -(a1 * (k + 1) * k + 2 * b0 * (k + 1)) * c[k + 1] \
            - a0 * (k + 2) * (k + 1) * c[k + 2]
        if abs(mu) < 1e-12 * scale:
            raise RecurrenceBreakdown(
                f"leading recurrence coefficient vanished at k={k}; solution not unique"
            )
        c[k] = rhs / mu
    y = ComplexPoly(tuple(c[: n + 1]))
    vpoly = ComplexPoly((v,))
    lam = -1.0 + 0j if classify(op) is OperatorClass.DEGENERATE else 0j
    residual = scaled_residual_norm(ParametricLame(op, ComplexPoly(), 0j), vpoly, y)
    return VanVleckPair(vpoly, y, lam, residual)


def _dedupe_by_v(pairs: list[VanVleckPair], tol: float) -> list[VanVleckPair]:
    unique: list[VanVleckPair] = []
    for pair in pairs:
        vc = np.asarray(pair.V.coeffs, dtype=complex)
        matched = False
        for kept in unique:
            kc = np.asarray(kept.V.coeffs, dtype=complex)
            if len(kc) == len(vc) and (len(vc) == 0 or np.max(np.abs(kc - vc)) < tol):
                matched = True
                break
        if not matched:
            unique.append(pair)
    return unique


def solve_heine_stieltjes(op: LameOperator, n: int,
                          opts: SolverOptions = SolverOptions(),
                          settings: NumericSettings = DEFAULT_SETTINGS
                          ) -> list[VanVleckPair]:
    """All (V, y) pairs found by the equilibrium route.

    Non-degenerate operators solve the classical unconstrained system; a
    degenerate operator fixes the Bethe multiplier at -1 for its
    extracted constraint derivative (that is the member of the parametric
    family equal to the original equation).  Multistart is heuristic:
    an empty or short list is a report, not an error.
    """
    if n == 0:
        return [VanVleckPair(ComplexPoly(), ComplexPoly((1,)), 0j, 0.0)]
    dec = extract(op, settings)
    problem = ChargeProblem(dec.problem.charges, n)
    degenerate = not dec.r_prime.is_zero()

    try:
        seeds = stieltjes_seeds(problem, n, settings)
    except LameForgeError:
        seeds = []
    rng = np.random.default_rng(opts.seed)
    pole_src = dec.r_prime if degenerate else None
    seeds = [s for s in seeds
             if _off_arrangement(problem, s.positions, pole_src, settings)]
    seeds = seeds + _random_configurations(problem, n, opts.random_starts, rng,
                                           pole_src, settings)

    solutions = []
    for seed in seeds:
        try:
            if degenerate:
                sol = solve_bethe_system(problem, dec.r_prime, -1.0, seed,
                                         opts, settings)
            else:
                sol = solve_equilibrium(problem, None, seed, opts, settings)
        except (LameForgeError, np.linalg.LinAlgError):
            continue
        solutions.append(sol)

    pairs: list[VanVleckPair] = []
    bound = None
    if classify(op) is OperatorClass.NON_DEGENERATE:
        bound = heine_count(n, op.A.degree() - 1) if op.A.degree() >= 2 else None
    pl = ParametricLame(op, dec.D, 0j)
    for sol in solutions:
        y = poly_from_roots(sol.sorted_positions())
        try:
            v = van_vleck_from_solution(pl, y, settings)
        except LameForgeError:
            continue
        lam = sol.lam if sol.lam is not None else 0j
        pairs.append(VanVleckPair(v, y, complex(lam),
                                  scaled_residual_norm(pl, v, y), bound))
    pairs = _dedupe_by_v(pairs, settings.dedupe_tol)
    pairs.sort(key=lambda pr: tuple((c.real, c.imag) for c in pr.V.coeffs))
    return pairs
