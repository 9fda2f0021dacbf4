"""Split a degenerate Lame operator into fixed charges plus a constraint.

Dividing B by A sends the quotient (and any higher-order pole parts of
B/A) into the derivative r' of a separable rational constraint
sum_k r(x_k), while the simple-pole residues of the remainder over A
become the fixed charges.  D = A*r' stays polynomial by construction.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .errors import NoConsistentRho, NotASolution, PoleHit
from .lame_ops import (
    LameOperator,
    ParametricLame,
    fuchs_index,
    scaled_residual_norm,
    van_vleck_from_solution,
)
from .polycore import (
    ComplexPoly,
    RationalFn,
    _divmod_linear,
    cluster_roots,
    find_roots,
    partial_fractions,
    poly_derive,
    poly_divrem,
    rational_antiderivative,
)
from .settings import DEFAULT_SETTINGS, NumericSettings


@dataclass(frozen=True)
class ChargeProblem:
    """Fixed charges (location, strength) plus the movable-charge count."""

    charges: tuple  # of (location: complex, strength: complex)
    movable_count: int

    def __post_init__(self):
        charges = tuple((complex(a), complex(s)) for a, s in self.charges)
        object.__setattr__(self, "charges", charges)
        if self.movable_count < 0:
            raise ValueError("movable_count must be >= 0")
        for i in range(len(charges)):
            if charges[i][1] == 0:
                raise ValueError("charge strengths must be nonzero")
            for j in range(i):
                if abs(charges[i][0] - charges[j][0]) <= 1e-8:
                    raise ValueError("charge locations must be pairwise distinct")

    def locations(self) -> list[complex]:
        return [a for a, _ in self.charges]


@dataclass(frozen=True)
class Constraint:
    """The condition sum_k r(x_k) = level."""

    r: RationalFn
    level: complex | None = None

    def with_level(self, level: complex) -> "Constraint":
        return replace(self, level=complex(level))


@dataclass(frozen=True)
class Decomposition:
    op: LameOperator
    problem: ChargeProblem          # fixed part only, movable_count 0
    r_prime: RationalFn
    D: ComplexPoly
    Btilde: ComplexPoly
    repeated_roots_of_A: bool = False


def _poly_deflate(p: ComplexPoly, a: complex, times: int) -> ComplexPoly:
    """p / (x-a)**times discarding the (tiny) remainders."""
    c = p.coeffs
    for _ in range(times):
        c, _rem = _divmod_linear(c, a)
    return ComplexPoly(c)


def extract(op: LameOperator,
            settings: NumericSettings = DEFAULT_SETTINGS) -> Decomposition:
    """Decompose B = A*r' + Btilde and read off the fixed charges.

    Simple-pole residues of B/A become charges; the division quotient
    plus all higher-order pole terms form r'.  Repeated roots of A are
    permitted (they feed higher-order pole terms, not charges) and are
    flagged in the result.
    """
    if fuchs_index(op) < 0:
        raise ValueError("operator must have nonnegative Fuchs index")
    A, B = op.A, op.B
    if B.is_zero():
        empty = ChargeProblem((), 0)
        return Decomposition(op, empty, RationalFn(), ComplexPoly(), ComplexPoly())
    if A.degree() == 0:
        # constant A: no poles at all, r' = B/A is polynomial
        r_prime = RationalFn(B * (1.0 / A.coeffs[0]))
        return Decomposition(op, ChargeProblem((), 0), r_prime, B, ComplexPoly())

    clusters = cluster_roots(find_roots(A, settings=settings), settings=settings)
    pf = partial_fractions(B, A, clusters, settings=settings)
    charges = tuple((a, r) for a, r in pf.simple_residues)
    r_prime = RationalFn(pf.poly_part, pf.higher_terms)
    d = A * pf.poly_part
    for pole, order, coeff in pf.higher_terms:
        d = d + coeff * _poly_deflate(A, pole, order)
    btilde = B - d
    return Decomposition(
        op=op,
        problem=ChargeProblem(charges, 0),
        r_prime=r_prime,
        D=d,
        Btilde=btilde,
        repeated_roots_of_A=any(m > 1 for _, m in clusters),
    )


def antidifferentiate(dec: Decomposition) -> Constraint:
    """Constraint with r a primitive of r' (zero integration constant)."""
    return Constraint(rational_antiderivative(dec.r_prime), level=None)


def constraint_level(r: RationalFn, points,
                     settings: NumericSettings = DEFAULT_SETTINGS) -> complex:
    """sum_k r(x_k); raises PoleHit when a point sits on a pole of r."""
    total = 0j
    poles = r.poles()
    for x in points:
        x = complex(x)
        for p in poles:
            if abs(x - p) <= settings.pole_hit:
                raise PoleHit(f"point {x} hits pole {p}")
        total += r(x)
    return total


def determine_multiplier(dec: Decomposition, y: ComplexPoly,
                         settings: NumericSettings = DEFAULT_SETTINGS,
                         full_output: bool = False):
    """Scalar rho making A y'' + (2B - rho D) y' + V y = 0 exactly solvable.

    The defect (division remainder plus quotient coefficients above the
    admissible Van Vleck degree) is affine in rho, so the minimizer is a
    one-dimensional complex least-squares fit over the stacked
    coefficients; the result is certified by reconstructing V.

    A constant y admits any rho; the conventional value 0 is returned and
    flagged.  Raises NoConsistentRho when no scalar passes certification.
    """
    A, B, D = dec.op.A, dec.op.B, dec.D
    if y.degree() < 1:
        rho = 0j
        if full_output:
            return rho, ComplexPoly(), 0.0, True
        return rho

    yp = poly_derive(y)
    p0 = A * poly_derive(yp) + 2 * B * yp
    p1 = D * yp
    q0, r0 = poly_divrem(-p0, y)
    q1, r1 = poly_divrem(p1, y)
    bound = max(A.degree() - 2, (D.degree() if not D.is_zero() else -(A.degree() + 10)) - 1)

    def stacked(quot: ComplexPoly, rem: ComplexPoly) -> np.ndarray:
        hi = [c for k, c in enumerate(quot.coeffs) if k > max(bound, -1)]
        return np.array(list(rem.coeffs) + hi + [0j], dtype=complex)

    v0, v1 = stacked(q0, r0), stacked(q1, r1)
    m = max(len(v0), len(v1))
    v0 = np.pad(v0, (0, m - len(v0)))
    v1 = np.pad(v1, (0, m - len(v1)))
    scale = 1.0 + max(p0.max_abs_coeff(), p1.max_abs_coeff())
    nrm1 = float(np.linalg.norm(v1))
    if nrm1 < 1e-14 * scale:
        if float(np.linalg.norm(v0)) < settings.van_vleck_rtol * scale:
            if full_output:
                v = van_vleck_from_solution(ParametricLame(dec.op, D, 0j), y, settings)
                return 0j, v, scaled_residual_norm(ParametricLame(dec.op, D, 0j), v, y), True
            return 0j
        raise NoConsistentRho("rho does not enter the defect but the defect is nonzero")
    rho = complex(-(np.vdot(v1, v0)) / np.vdot(v1, v1))
    pl = ParametricLame(dec.op, D, rho)
    try:
        v = van_vleck_from_solution(pl, y, settings)
    except NotASolution as exc:
        raise NoConsistentRho(f"least-squares rho {rho} fails certification: {exc}")
    if full_output:
        return rho, v, scaled_residual_norm(pl, v, y), False
    return rho
