"""Lame operators, Fuchs indices, residuals of parametric Lame equations.

The operator convention is A * d^2/dx^2 + 2B * d/dx, so equations written
in the literature as A y'' + b y' + V y = 0 are ingested with B = b/2.
The parametric form is A y'' + (2B - rho*D) y' + V y = 0.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from .errors import DegreeViolation, NotASolution
from .polycore import ComplexPoly, poly_derive, poly_divrem
from .settings import DEFAULT_SETTINGS, NumericSettings


class OperatorClass(Enum):
    NON_DEGENERATE = "NonDegenerate"
    DEGENERATE = "Degenerate"


@dataclass(frozen=True)
class LameOperator:
    A: ComplexPoly
    B: ComplexPoly

    def __post_init__(self):
        if self.A.is_zero():
            raise ValueError("A must not be the zero polynomial")


@dataclass(frozen=True)
class ParametricLame:
    op: LameOperator
    D: ComplexPoly
    rho: complex = 0j

    def __post_init__(self):
        object.__setattr__(self, "rho", complex(self.rho))


def _deg_or_sentinel(p: ComplexPoly, ref_deg: int) -> int:
    # the zero polynomial acts as degree -infinity; a sentinel far below
    # ref_deg keeps integer max() semantics
    return p.degree() if not p.is_zero() else -(ref_deg + 10)


def fuchs_index(op: LameOperator) -> int:
    """max(deg A - 2, deg B - 1)."""
    deg_a = op.A.degree()
    return max(deg_a - 2, _deg_or_sentinel(op.B, deg_a) - 1)


def classify(op: LameOperator) -> OperatorClass:
    """Non-degenerate iff deg A > deg B."""
    deg_a = op.A.degree()
    if deg_a > _deg_or_sentinel(op.B, deg_a):
        return OperatorClass.NON_DEGENERATE
    return OperatorClass.DEGENERATE


def first_order_coefficient(pl: ParametricLame) -> ComplexPoly:
    """The polynomial 2B - rho*D multiplying y'."""
    return 2 * pl.op.B - pl.rho * pl.D


def lame_residual(pl: ParametricLame, V: ComplexPoly, y: ComplexPoly) -> ComplexPoly:
    """A y'' + (2B - rho D) y' + V y as a polynomial."""
    yp = poly_derive(y)
    ypp = poly_derive(yp)
    return pl.op.A * ypp + first_order_coefficient(pl) * yp + V * y


def scaled_residual_norm(pl: ParametricLame, V: ComplexPoly, y: ComplexPoly) -> float:
    """Max residual coefficient relative to the largest term coefficient.

    A value below the zero-polynomial tolerance certifies that y solves
    the parametric equation with Van Vleck polynomial V.
    """
    yp = poly_derive(y)
    ypp = poly_derive(yp)
    t1 = pl.op.A * ypp
    t2 = first_order_coefficient(pl) * yp
    t3 = V * y
    scale = 1.0 + max(t1.max_abs_coeff(), t2.max_abs_coeff(), t3.max_abs_coeff())
    return (t1 + t2 + t3).max_abs_coeff() / scale


def is_zero_residual(pl: ParametricLame, V: ComplexPoly, y: ComplexPoly,
                     settings: NumericSettings = DEFAULT_SETTINGS) -> bool:
    return scaled_residual_norm(pl, V, y) < settings.zero_poly_rtol


def van_vleck_degree_bound(pl: ParametricLame) -> int:
    """max(p-1, q-1) with p+1 = deg A and q = deg D."""
    deg_a = pl.op.A.degree()
    return max(deg_a - 2, _deg_or_sentinel(pl.D, deg_a) - 1)


def van_vleck_from_solution(pl: ParametricLame, y: ComplexPoly,
                            settings: NumericSettings = DEFAULT_SETTINGS) -> ComplexPoly:
    """Recover V = -(A y'' + (2B - rho D) y') / y by exact division.

    Raises NotASolution when the division remainder exceeds the tolerance
    relative to the dividend, and DegreeViolation when the recovered V
    exceeds max(p-1, q-1).
    """
    if y.degree() < 1:
        raise ValueError("y must be nonconstant")
    yp = poly_derive(y)
    numerator = -(pl.op.A * poly_derive(yp) + first_order_coefficient(pl) * yp)
    v, rem = poly_divrem(numerator, y)
    dividend_scale = 1.0 + numerator.max_abs_coeff()
    rel = rem.max_abs_coeff() / dividend_scale
    if rel > settings.van_vleck_rtol:
        raise NotASolution(f"division remainder {rel:.3e} exceeds tolerance")
    bound = van_vleck_degree_bound(pl)
    if not v.is_zero() and v.degree() > bound:
        raise DegreeViolation(f"deg V = {v.degree()} exceeds bound {bound}")
    return v
