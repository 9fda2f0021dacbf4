"""Complex polynomial and rational-function arithmetic.

Dense ascending-coefficient polynomials over the complex numbers, with
root finding by simultaneous (Aberth-Ehrlich) iteration, long division,
partial fractions with higher-order poles, and termwise antiderivatives
of log-free rational functions.  All values are immutable and all
operations are pure functions.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    InconsistentRoots,
    LogTermError,
    PoleClusterError,
    RootFindingError,
    ZeroPolynomialDivision,
)
from .settings import DEFAULT_SETTINGS, NumericSettings


@dataclass(frozen=True)
class ComplexPoly:
    """Dense univariate polynomial, coefficients ascending by degree.

    Trailing coefficients that are exactly zero are trimmed at
    construction; the zero polynomial has an empty coefficient tuple and
    degree -1.  Approximate cleanup of small coefficients never happens
    implicitly -- see :func:`poly_cleanup`.
    """

    coeffs: tuple = ()

    def __post_init__(self):
        c = tuple(complex(v) for v in self.coeffs)
        while c and c[-1] == 0:
            c = c[:-1]
        object.__setattr__(self, "coeffs", c)

    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def leading(self) -> complex:
        if not self.coeffs:
            return 0j
        return self.coeffs[-1]

    def max_abs_coeff(self) -> float:
        return max((abs(c) for c in self.coeffs), default=0.0)

    def __call__(self, x: complex) -> complex:
        return poly_eval(self, x)

    def __add__(self, other):
        other = _coerce(other)
        n = max(len(self.coeffs), len(other.coeffs))
        return ComplexPoly(
            tuple(_get(self.coeffs, k) + _get(other.coeffs, k) for k in range(n))
        )

    __radd__ = __add__

    def __neg__(self):
        return ComplexPoly(tuple(-c for c in self.coeffs))

    def __sub__(self, other):
        return self + (-_coerce(other))

    def __rsub__(self, other):
        return _coerce(other) + (-self)

    def __mul__(self, other):
        other = _coerce(other)
        if self.is_zero() or other.is_zero():
            return ComplexPoly()
        out = [0j] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return ComplexPoly(tuple(out))

    __rmul__ = __mul__

    def derive(self) -> "ComplexPoly":
        return poly_derive(self)


def _coerce(v) -> ComplexPoly:
    if isinstance(v, ComplexPoly):
        return v
    return ComplexPoly((complex(v),))


def _get(seq, k):
    return seq[k] if k < len(seq) else 0j


@dataclass(frozen=True)
class RationalFn:
    """poly_part(x) + sum of coeff / (x - pole)**order terms.

    Stored pole terms have pairwise distinct (pole, order) keys, order >= 1
    and nonzero coefficients; duplicates are merged at construction.
    """

    poly_part: ComplexPoly = field(default_factory=ComplexPoly)
    pole_terms: tuple = ()  # of (pole: complex, order: int, coeff: complex)

    def __post_init__(self):
        merged: dict[tuple[complex, int], complex] = {}
        for pole, order, coeff in self.pole_terms:
            order = int(order)
            if order < 1:
                raise ValueError(f"pole order must be >= 1, got {order}")
            key = (complex(pole), order)
            merged[key] = merged.get(key, 0j) + complex(coeff)
        terms = tuple(
            (pole, order, coeff)
            for (pole, order), coeff in sorted(
                merged.items(), key=lambda kv: (kv[0][0].real, kv[0][0].imag, kv[0][1])
            )
            if coeff != 0
        )
        object.__setattr__(self, "pole_terms", terms)
        if not isinstance(self.poly_part, ComplexPoly):
            object.__setattr__(self, "poly_part", ComplexPoly(tuple(self.poly_part)))

    def __call__(self, x: complex) -> complex:
        val = poly_eval(self.poly_part, x)
        for pole, order, coeff in self.pole_terms:
            val += coeff / (x - pole) ** order
        return val

    def is_polynomial(self) -> bool:
        return not self.pole_terms

    def is_zero(self) -> bool:
        return self.poly_part.is_zero() and not self.pole_terms

    def poles(self) -> tuple:
        return tuple(sorted({p for p, _, _ in self.pole_terms},
                            key=lambda z: (z.real, z.imag)))

    def derive(self) -> "RationalFn":
        terms = tuple(
            (pole, order + 1, -order * coeff) for pole, order, coeff in self.pole_terms
        )
        return RationalFn(poly_derive(self.poly_part), terms)

    def scale(self, s: complex) -> "RationalFn":
        s = complex(s)
        return RationalFn(
            self.poly_part * s,
            tuple((p, o, s * c) for p, o, c in self.pole_terms),
        )


@dataclass(frozen=True)
class PartialFractionDecomposition:
    """Quotient polynomial, simple residues, and higher-order pole terms."""

    poly_part: ComplexPoly
    simple_residues: tuple  # of (pole, residue)
    higher_terms: tuple     # of (pole, order >= 2, coeff)

    def as_rational(self) -> RationalFn:
        terms = tuple((p, 1, r) for p, r in self.simple_residues) + tuple(
            self.higher_terms
        )
        return RationalFn(self.poly_part, terms)

    def __call__(self, x: complex) -> complex:
        return self.as_rational()(x)


# ---------------------------------------------------------------------------
# basic operations


def poly_eval(p: ComplexPoly, x: complex) -> complex:
    """Evaluate by Horner's scheme."""
    acc = 0j
    for c in reversed(p.coeffs):
        acc = acc * x + c
    return acc


def poly_derive(p: ComplexPoly) -> ComplexPoly:
    return ComplexPoly(tuple(k * c for k, c in enumerate(p.coeffs) if k > 0))


def poly_antiderive(p: ComplexPoly) -> ComplexPoly:
    """Antiderivative with zero constant term."""
    return ComplexPoly((0j,) + tuple(c / (k + 1) for k, c in enumerate(p.coeffs)))


def poly_cleanup(p: ComplexPoly, eps: float | None = None,
                 settings: NumericSettings = DEFAULT_SETTINGS) -> ComplexPoly:
    """Zero out coefficients below eps relative to the largest one."""
    if eps is None:
        eps = settings.cleanup_eps
    scale = p.max_abs_coeff()
    if scale == 0.0:
        return p
    return ComplexPoly(tuple(0j if abs(c) < eps * scale else c for c in p.coeffs))


def poly_divrem(a: ComplexPoly, b: ComplexPoly) -> tuple[ComplexPoly, ComplexPoly]:
    """Long division: a = q*b + r with deg r < deg b."""
    if b.is_zero():
        raise ZeroPolynomialDivision("division by the zero polynomial")
    if a.degree() < b.degree():
        return ComplexPoly(), a
    rem = list(a.coeffs)
    nb = len(b.coeffs)
    lead = b.coeffs[-1]
    quot = [0j] * (len(rem) - nb + 1)
    for k in range(len(rem) - nb, -1, -1):
        q = rem[k + nb - 1] / lead
        quot[k] = q
        if q != 0:
            for j in range(nb):
                rem[k + j] -= q * b.coeffs[j]
    return ComplexPoly(tuple(quot)), ComplexPoly(tuple(rem[: nb - 1]))


def poly_from_roots(roots) -> ComplexPoly:
    """Monic polynomial with exactly the given root multiset."""
    p = ComplexPoly((1,))
    for r in roots:
        p = p * ComplexPoly((-complex(r), 1))
    return p


def _divmod_linear(coeffs: tuple, a: complex) -> tuple[tuple, complex]:
    """Synthetic division by (x - a): coeffs = q*(x-a) + rem."""
    n = len(coeffs)
    if n == 0:
        return (), 0j
    q = [0j] * (n - 1)
    acc = coeffs[-1]
    for k in range(n - 2, -1, -1):
        q[k] = acc
        acc = coeffs[k] + a * acc
    return tuple(q), acc


def taylor_coeffs(p: ComplexPoly, a: complex, count: int) -> list[complex]:
    """First `count` coefficients of p(a + t) in t, by repeated synthetic division."""
    out = []
    c = p.coeffs
    for _ in range(count):
        if not c:
            out.append(0j)
            continue
        c, rem = _divmod_linear(c, a)
        out.append(rem)
    return out


# ---------------------------------------------------------------------------
# root finding


def _companion_guesses(c: np.ndarray) -> np.ndarray | None:
    n = len(c) - 1
    if n == 1:
        return np.array([-c[0] / c[1]])
    m = np.zeros((n, n), dtype=complex)
    m[1:, :-1] = np.eye(n - 1)
    m[:, -1] = -np.asarray(c[:-1]) / c[-1]
    try:
        eig = np.linalg.eigvals(m)
    except np.linalg.LinAlgError:
        return None
    if not np.all(np.isfinite(eig)):
        return None
    return eig


def _circle_guesses(c: np.ndarray) -> np.ndarray:
    n = len(c) - 1
    radius = 1.0 + max(abs(c[:-1])) / abs(c[-1]) if n > 0 else 1.0
    k = np.arange(n)
    return radius * np.exp(2j * np.pi * (k + 0.25) / n + 0.13j)


def _backward_errors(c: np.ndarray, z: np.ndarray) -> np.ndarray:
    pv = np.polyval(c[::-1], z)
    scale = np.polyval(np.abs(c)[::-1], np.abs(z))
    out = np.empty(len(z))
    for i in range(len(z)):
        out[i] = abs(pv[i]) if scale[i] == 0.0 else abs(pv[i]) / scale[i]
    return out


def find_roots(p: ComplexPoly, tol: float | None = None, max_iter: int | None = None,
               settings: NumericSettings = DEFAULT_SETTINGS) -> list[complex]:
    """All roots of p with multiplicity, sorted by (real, imag).

    Companion-matrix eigenvalues seed an Aberth-Ehrlich simultaneous
    refinement; a perturbed circle of initial points is the fallback when
    the eigensolver fails.  A root is accepted when its backward error
    |p(z)| / sum_k |c_k| |z|^k falls below `tol`.

    Raises RootFindingError after `max_iter` sweeps without acceptance.
    """
    if tol is None:
        tol = settings.root_tol
    if max_iter is None:
        max_iter = settings.root_max_iter
    deg = p.degree()
    if deg < 1:
        raise ValueError("find_roots needs a polynomial of degree >= 1")

    coeffs = list(p.coeffs)
    zeros_at_origin = 0
    while coeffs[0] == 0:
        zeros_at_origin += 1
        coeffs.pop(0)
    roots: list[complex] = [0j] * zeros_at_origin
    n = len(coeffs) - 1
    if n == 0:
        return sorted(roots, key=lambda z: (z.real, z.imag))

    c = np.asarray(coeffs, dtype=complex)
    z = _companion_guesses(c)
    if z is None:
        z = _circle_guesses(c)
    # split exact duplicates so the Aberth correction stays finite
    for i in range(n):
        for j in range(i):
            if z[i] == z[j]:
                z[i] += (1e-8 + 1e-8j) * (1.0 + abs(z[i])) * (i + 1)

    cd = np.array([k * c[k] for k in range(1, n + 1)], dtype=complex)
    ok = False
    for _ in range(max_iter):
        if np.all(_backward_errors(c, z) < tol):
            ok = True
            break
        pv = np.polyval(c[::-1], z)
        dv = np.polyval(cd[::-1], z)
        tiny = 1e-300
        dv = np.where(np.abs(dv) < tiny, tiny, dv)
        newton = pv / dv
        diff = z[:, None] - z[None, :]
        np.fill_diagonal(diff, 1.0)
        diff = np.where(diff == 0, 1e-30, diff)
        s = np.sum(1.0 / diff, axis=1) - 1.0  # subtract the diagonal fill
        denom = 1.0 - newton * s
        denom = np.where(np.abs(denom) < 1e-12, 1.0, denom)
        step = newton / denom
        z = z - step
    if not ok and not np.all(_backward_errors(c, z) < tol):
        raise RootFindingError(
            f"root iteration did not reach tolerance {tol} in {max_iter} sweeps"
        )
    roots.extend(complex(v) for v in z)
    return sorted(roots, key=lambda v: (v.real, v.imag))


def cluster_roots(roots, separation: float | None = None,
                  settings: NumericSettings = DEFAULT_SETTINGS) -> list[tuple[complex, int]]:
    """Group a root list into (center, multiplicity) clusters.

    Roots closer than `separation` are merged; the cluster center is the
    mean of its members.
    """
    if separation is None:
        separation = settings.pole_separation
    remaining = [complex(r) for r in roots]
    clusters: list[list[complex]] = []
    for r in remaining:
        placed = False
        for cl in clusters:
            if any(abs(r - m) <= separation for m in cl):
                cl.append(r)
                placed = True
                break
        if not placed:
            clusters.append([r])
    out = []
    for cl in clusters:
        center = sum(cl) / len(cl)
        out.append((center, len(cl)))
    out.sort(key=lambda t: (t[0].real, t[0].imag))
    return out


# ---------------------------------------------------------------------------
# partial fractions and antiderivatives


def partial_fractions(numer: ComplexPoly, denom: ComplexPoly, denom_roots,
                      settings: NumericSettings = DEFAULT_SETTINGS
                      ) -> PartialFractionDecomposition:
    """Decompose numer/denom given the root multiset of denom.

    Parameters
    ----------
    denom_roots : list of (pole, multiplicity)
        Validated against denom; distinct listed poles must be separated
        by more than the pole-separation threshold.

    Returns poly_part (the division quotient), simple residues
    numer(a)/denom'(a) at order-1 poles, and higher-order pole
    coefficients from the local Taylor expansion.
    """
    if numer.is_zero() or denom.is_zero():
        raise ValueError("partial_fractions needs nonzero numerator and denominator")
    roots = [(complex(a), int(m)) for a, m in denom_roots]
    total = sum(m for _, m in roots)
    if total != denom.degree():
        raise InconsistentRoots(
            f"root multiplicities sum to {total}, expected degree {denom.degree()}"
        )
    for i in range(len(roots)):
        for j in range(i):
            gap = abs(roots[i][0] - roots[j][0])
            if gap < settings.pole_separation:
                raise PoleClusterError(
                    f"poles {roots[i][0]} and {roots[j][0]} separated by {gap:.3e}"
                )
    dscale = denom.max_abs_coeff()
    for a, m in roots:
        local = sum(abs(c) * abs(a) ** k for k, c in enumerate(denom.coeffs))
        err = abs(poly_eval(denom, a)) / max(local, dscale * 1e-30)
        if err > settings.root_validation_tol:
            raise InconsistentRoots(f"{a} is not a root of denom (backward error {err:.3e})")

    poly_part, _ = poly_divrem(numer, denom)
    dprime = poly_derive(denom)
    simple: list[tuple[complex, complex]] = []
    higher: list[tuple[complex, int, complex]] = []
    for a, m in roots:
        if m == 1:
            simple.append((a, poly_eval(numer, a) / poly_eval(dprime, a)))
            continue
        # deflate denom by (x-a)^m, then expand numer/q locally at a
        q = denom.coeffs
        for _ in range(m):
            q, _rem = _divmod_linear(q, a)
        qpoly = ComplexPoly(q)
        nu = taylor_coeffs(numer, a, m)
        qu = taylor_coeffs(qpoly, a, m)
        g = [0j] * m
        for k in range(m):
            acc = nu[k]
            for i in range(1, k + 1):
                acc -= qu[i] * g[k - i]
            g[k] = acc / qu[0]
        # g[k] multiplies 1/(x-a)^(m-k)
        for k in range(m):
            order = m - k
            if order == 1:
                simple.append((a, g[k]))
            else:
                higher.append((a, order, g[k]))

    scale = max(
        [poly_part.max_abs_coeff()]
        + [abs(r) for _, r in simple]
        + [abs(cc) for _, _, cc in higher]
        + [1.0]
    )
    drop = settings.residue_drop * scale
    simple = [(a, r) for a, r in simple if abs(r) > drop]
    higher = [(a, o, cc) for a, o, cc in higher if abs(cc) > drop]
    return PartialFractionDecomposition(poly_part, tuple(simple), tuple(higher))


def rational_antiderivative(f: RationalFn) -> RationalFn:
    """Termwise antiderivative; raises LogTermError on simple poles.

    The polynomial part integrates with zero constant term; a term
    c/(x-a)^k with k >= 2 integrates to -c/((k-1)(x-a)^(k-1)).
    """
    for pole, order, coeff in f.pole_terms:
        if order == 1:
            raise LogTermError(
                f"simple pole at {pole} integrates to a logarithm"
            )
    terms = tuple(
        (pole, order - 1, -coeff / (order - 1)) for pole, order, coeff in f.pole_terms
    )
    return RationalFn(poly_antiderive(f.poly_part), terms)
