"""Canonical JSON and CSV forms for every exchangeable object.

Complex numbers are explicit [re, im] pairs; field order is fixed by the
builders below so that re-emitting a parsed document is byte-identical.
"""

from __future__ import annotations

import json

from .constraint_extract import ChargeProblem, Constraint, Decomposition
from .electrostatics import EquilibriumSolution, SolutionKind
from .lame_ops import LameOperator, ParametricLame
from .polycore import ComplexPoly, RationalFn
from .stieltjes_solver import VanVleckPair


def _pair(z: complex) -> list[float]:
    z = complex(z)
    return [z.real, z.imag]


def _unpair(v) -> complex:
    if not (isinstance(v, (list, tuple)) and len(v) == 2):
        raise ValueError(f"expected [re, im] pair, got {v!r}")
    return complex(float(v[0]), float(v[1]))


def poly_to_json(p: ComplexPoly) -> dict:
    return {"coeffs": [_pair(c) for c in p.coeffs]}


def poly_from_json(obj) -> ComplexPoly:
    if not isinstance(obj, dict) or "coeffs" not in obj:
        raise ValueError("polynomial JSON needs a 'coeffs' field")
    return ComplexPoly(tuple(_unpair(c) for c in obj["coeffs"]))


def rational_to_json(r: RationalFn) -> dict:
    return {
        "poly": poly_to_json(r.poly_part),
        "poles": [
            {"at": _pair(p), "order": o, "coeff": _pair(c)}
            for p, o, c in r.pole_terms
        ],
    }


def rational_from_json(obj) -> RationalFn:
    if not isinstance(obj, dict) or "poly" not in obj:
        raise ValueError("rational JSON needs 'poly' and 'poles' fields")
    terms = tuple(
        (_unpair(t["at"]), int(t["order"]), _unpair(t["coeff"]))
        for t in obj.get("poles", [])
    )
    return RationalFn(poly_from_json(obj["poly"]), terms)


def operator_to_json(op: LameOperator) -> dict:
    return {"A": poly_to_json(op.A), "B": poly_to_json(op.B), "convention": "2B"}


def operator_from_json(obj) -> LameOperator:
    if not isinstance(obj, dict) or "A" not in obj or "B" not in obj:
        raise ValueError("operator JSON needs 'A' and 'B' fields")
    convention = obj.get("convention", "2B")
    if convention != "2B":
        raise ValueError(f"unsupported operator convention {convention!r}")
    return LameOperator(poly_from_json(obj["A"]), poly_from_json(obj["B"]))


def parametric_to_json(pl: ParametricLame) -> dict:
    out = operator_to_json(pl.op)
    out["D"] = poly_to_json(pl.D)
    out["rho"] = _pair(pl.rho)
    return out


def parametric_from_json(obj) -> ParametricLame:
    op = operator_from_json(obj)
    return ParametricLame(op, poly_from_json(obj.get("D", {"coeffs": []})),
                          _unpair(obj.get("rho", [0.0, 0.0])))


def charges_to_json(charges) -> list[dict]:
    return [{"at": _pair(a), "strength": _pair(s)} for a, s in charges]


def charges_from_json(items) -> tuple:
    return tuple((_unpair(c["at"]), _unpair(c["strength"])) for c in items)


def problem_to_json(problem: ChargeProblem, constraint: Constraint | None = None) -> dict:
    out = {
        "charges": charges_to_json(problem.charges),
        "movable_count": problem.movable_count,
        "constraint": None,
    }
    if constraint is not None:
        out["constraint"] = {
            "r": rational_to_json(constraint.r),
            "level": None if constraint.level is None else _pair(constraint.level),
        }
    return out


def problem_from_json(obj) -> tuple[ChargeProblem, Constraint | None]:
    if not isinstance(obj, dict) or "movable_count" not in obj:
        raise ValueError("problem JSON needs 'charges' and 'movable_count'")
    problem = ChargeProblem(charges_from_json(obj.get("charges", [])),
                            int(obj["movable_count"]))
    cons = obj.get("constraint")
    constraint = None
    if cons is not None:
        level = cons.get("level")
        constraint = Constraint(rational_from_json(cons["r"]),
                                None if level is None else _unpair(level))
    return problem, constraint


def decomposition_to_json(dec: Decomposition, r: RationalFn) -> dict:
    """Bundle charges, the integrated constraint r, D, Btilde, and flags."""
    return {
        "charges": charges_to_json(dec.problem.charges),
        "r": rational_to_json(r),
        "r_prime": rational_to_json(dec.r_prime),
        "D": poly_to_json(dec.D),
        "Btilde": poly_to_json(dec.Btilde),
        "flags": {"repeated_roots_of_A": dec.repeated_roots_of_A},
    }


def solution_to_json(sol: EquilibriumSolution) -> dict:
    return {
        "X": [_pair(x) for x in sol.positions],
        "lambda": None if sol.lam is None else _pair(sol.lam),
        "grad_residual": sol.grad_residual,
        "constraint_residual": sol.constraint_residual,
        "energy": sol.energy,
        "kind": sol.kind.value,
    }


def solution_from_json(obj) -> EquilibriumSolution:
    lam = obj.get("lambda")
    return EquilibriumSolution(
        tuple(_unpair(x) for x in obj["X"]),
        None if lam is None else _unpair(lam),
        float(obj["grad_residual"]),
        obj.get("constraint_residual"),
        float(obj["energy"]),
        SolutionKind(obj["kind"]),
    )


def pair_to_json(pair: VanVleckPair) -> dict:
    return {
        "V": poly_to_json(pair.V),
        "y": poly_to_json(pair.y),
        "lambda": _pair(pair.lam),
        "residual": pair.residual,
        "heine_bound": pair.heine_bound,
    }


def pair_from_json(obj) -> VanVleckPair:
    return VanVleckPair(
        poly_from_json(obj["V"]),
        poly_from_json(obj["y"]),
        _unpair(obj["lambda"]),
        float(obj["residual"]),
        obj.get("heine_bound"),
    )


def dumps(obj) -> str:
    """Canonical serialization: insertion order, newline-terminated."""
    return json.dumps(obj, indent=2) + "\n"


def solutions_to_csv(solutions) -> str:
    """One row per movable charge; per-solution header lines carry the
    multiplier, residuals, and energy."""
    lines = []
    for idx, sol in enumerate(solutions):
        lam = "" if sol.lam is None else f"{sol.lam.real!r},{sol.lam.imag!r}"
        cres = "" if sol.constraint_residual is None else repr(sol.constraint_residual)
        lines.append(
            f"# solution {idx}: lambda={lam} grad_residual={sol.grad_residual!r} "
            f"constraint_residual={cres} energy={sol.energy!r}"
        )
        lines.append("index,re,im")
        for k, x in enumerate(sol.positions):
            lines.append(f"{k},{x.real!r},{x.imag!r}")
    return "\n".join(lines) + "\n"


def plotdata(header_cols, rows) -> str:
    """Whitespace-separated columns with a '#' header line."""
    lines = ["# " + " ".join(header_cols)]
    for row in rows:
        lines.append(" ".join(repr(float(v)) for v in row))
    return "\n".join(lines) + "\n"
