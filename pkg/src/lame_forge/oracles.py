"""Independent generators for the classical and exotic polynomial families.

Everything here is built from three-term recurrences, Rodrigues-style
recursions, or hypergeometric truncations -- never from the solvers they
are used to test.  Newton's identities provide power sums straight from
coefficients as an extra oracle for constraint levels.
"""

from __future__ import annotations

import math

from .errors import NonMonomialConstraint, PochhammerPole
from .polycore import ComplexPoly, RationalFn, poly_derive
from .settings import DEFAULT_SETTINGS, NumericSettings


def hermite(n: int) -> ComplexPoly:
    """Physicists' Hermite polynomial H_n."""
    if n < 0:
        raise ValueError("n must be >= 0")
    if n == 0:
        return ComplexPoly((1,))
    prev, cur = ComplexPoly((1,)), ComplexPoly((0, 2))
    for k in range(1, n):
        nxt = ComplexPoly((0, 2)) * cur - (2 * k) * prev
        prev, cur = cur, nxt
    return cur


def laguerre(n: int, alpha: float) -> ComplexPoly:
    """Generalized Laguerre polynomial L_n^alpha."""
    if n < 0:
        raise ValueError("n must be >= 0")
    if n == 0:
        return ComplexPoly((1,))
    prev, cur = ComplexPoly((1,)), ComplexPoly((1 + alpha, -1))
    for k in range(1, n):
        nxt = (ComplexPoly((2 * k + 1 + alpha, -1)) * cur - (k + alpha) * prev) \
            * (1.0 / (k + 1))
        prev, cur = cur, nxt
    return cur


def jacobi(n: int, alpha: float, beta: float) -> ComplexPoly:
    """Jacobi polynomial P_n^(alpha, beta), alpha, beta > -1."""
    if n < 0:
        raise ValueError("n must be >= 0")
    if alpha <= -1 or beta <= -1:
        raise ValueError("need alpha, beta > -1")
    if n == 0:
        return ComplexPoly((1,))
    prev = ComplexPoly((1,))
    cur = ComplexPoly(((alpha - beta) / 2.0, (alpha + beta + 2) / 2.0))
    for k in range(2, n + 1):
        s = 2 * k + alpha + beta
        c1 = 2 * k * (k + alpha + beta) * (s - 2)
        c2 = (s - 1) * (alpha**2 - beta**2)
        c3 = (s - 2) * (s - 1) * s
        c4 = 2 * (k + alpha - 1) * (k + beta - 1) * s
        nxt = (ComplexPoly((c2, c3)) * cur - c4 * prev) * (1.0 / c1)
        prev, cur = cur, nxt
    return cur


def relativistic_hermite(n: int, big_n: float) -> ComplexPoly:
    """Relativistic Hermite polynomial H_n^N from its Rodrigues recursion.

    With u_0 = 1 and u_{k+1} = (1 + x^2/N) u_k' - (N+k)(2x/N) u_k, the
    Rodrigues definition gives H_n^N = (-1)^n u_n.  The sign bookkeeping
    is pinned by H_1^N = 2x and the vanishing residual of
    (N + x^2) y'' - 2(N+n-1) x y' + n(2N+n-1) y = 0.
    """
    if n < 0:
        raise ValueError("n must be >= 0")
    if big_n <= 0:
        raise ValueError("N must be positive")
    u = ComplexPoly((1,))
    for k in range(n):
        u = ComplexPoly((1, 0, 1.0 / big_n)) * poly_derive(u) \
            - ComplexPoly((0, 2.0 * (big_n + k) / big_n)) * u
    return u if n % 2 == 0 else -u


def substitute_power(p: ComplexPoly, m: int) -> ComplexPoly:
    """p(x^m) by coefficient spreading."""
    if m < 1:
        raise ValueError("m must be >= 1")
    if p.is_zero():
        return ComplexPoly()
    out = [0j] * ((len(p.coeffs) - 1) * m + 1)
    for k, c in enumerate(p.coeffs):
        out[k * m] += c
    return ComplexPoly(tuple(out))


def palindromic_substitute(p: ComplexPoly) -> ComplexPoly:
    """x^n * p(x + 1/x) for p of degree n, expanded exactly."""
    n = max(p.degree(), 0)
    out = ComplexPoly()
    quad = ComplexPoly((1, 0, 1))  # x^2 + 1
    for k, c in enumerate(p.coeffs):
        term = ComplexPoly((c,))
        for _ in range(k):
            term = term * quad
        term = ComplexPoly((0j,) * (n - k) + term.coeffs)
        out = out + term
    return out


def pochhammer(t: complex, j: int) -> complex:
    """Rising factorial (t)_j with (t)_0 = 1."""
    if j < 0:
        raise ValueError("j must be >= 0")
    out = 1 + 0j
    for i in range(j):
        out *= t + i
    return out


def hyp1f1_truncated(a: complex, b: complex, terms: int) -> list[complex]:
    """Coefficients of the 1F1(a; b; x) series, truncated after `terms`.

    Coefficient j is (a)_j / ((b)_j j!); exact polynomial coefficients
    when a is a nonpositive integer and terms > -a.  Raises
    PochhammerPole when (b)_j vanishes inside the range.
    """
    if terms < 1:
        raise ValueError("terms must be >= 1")
    out = []
    num = 1 + 0j
    den = 1 + 0j
    for j in range(terms):
        if j > 0:
            num *= a + (j - 1)
            den *= b + (j - 1)
        if den == 0:
            raise PochhammerPole(f"(b)_{j} vanished for b = {b}")
        out.append(num / den / math.factorial(j))
    return out


def schrodinger_params(m: int, d: int, branch: str) -> tuple[int, int]:
    """(n, N) for the Schroedinger-type family member.

    Even branch: n = (m+1) d, N = m d.  Odd branch: n = (m+1) d - 1,
    N = m d - 1 (the value making m n = 1 + N (m+1) hold exactly, which
    the zero-residual certificate requires).
    """
    if branch == "even":
        return (m + 1) * d, m * d
    if branch == "odd":
        return (m + 1) * d - 1, m * d - 1
    raise ValueError(f"branch must be 'even' or 'odd', got {branch!r}")


def schrodinger_solution(m: int, d: int, branch: str) -> ComplexPoly:
    """Polynomial solution of y'' - (m+1) x^m y' + m(m+1) n x^(m-1) y = 0.

    The even branch is L_N^(-1/(m+1))(x^(m+1)) and the odd branch
    x * L_N^(1/(m+1))(x^(m+1)), with (n, N) from schrodinger_params; the
    Laguerre parameter signs are fixed by the hypergeometric basis
    1F1(.; 1 -+ 1/(m+1); x^(m+1)) and certified by the residual.
    """
    if m < 1 or d < 1:
        raise ValueError("need m >= 1 and d >= 1")
    _, big_n = schrodinger_params(m, d, branch)
    if branch == "even":
        return substitute_power(laguerre(big_n, -1.0 / (m + 1)), m + 1)
    core = substitute_power(laguerre(big_n, 1.0 / (m + 1)), m + 1)
    return ComplexPoly((0j,) + core.coeffs)


def newton_power_sums(p: ComplexPoly, kmax: int) -> list[complex]:
    """Power sums p_k = sum over roots of root^k, k = 1..kmax.

    Computed from the coefficients alone via Newton's identities, so the
    result is independent of any root-finding.
    """
    n = p.degree()
    if n < 0:
        raise ValueError("zero polynomial has no roots")
    lead = p.coeffs[-1]
    mono = [c / lead for c in p.coeffs]
    # elementary symmetric functions e_1..e_n
    e = [0j] * (n + 1)
    for k in range(1, n + 1):
        e[k] = (-1) ** k * mono[n - k]
    ps = [0j] * (kmax + 1)
    for k in range(1, kmax + 1):
        if k <= n:
            acc = (-1) ** (k - 1) * k * e[k]
            for i in range(1, k):
                acc += (-1) ** (i - 1) * e[i] * ps[k - i]
        else:
            acc = 0j
            for i in range(1, n + 1):
                acc += (-1) ** (i - 1) * e[i] * ps[k - i]
        ps[k] = acc
    return ps[1:]


def reciprocal_power_sums(p: ComplexPoly, kmax: int) -> list[complex]:
    """Power sums of the reciprocals of the roots (roots must be nonzero)."""
    if not p.coeffs or p.coeffs[0] == 0:
        raise ValueError("polynomial has a zero root")
    return newton_power_sums(ComplexPoly(tuple(reversed(p.coeffs))), kmax)


def scale_to_level(zeros, r: RationalFn, target_level: complex,
                   settings: NumericSettings = DEFAULT_SETTINGS
                   ) -> tuple[complex, list[complex]]:
    """Scale s with sum r(s * x_k) = target_level for a monomial r.

    Only single-power monomials r = c x^k are scalable this way (the
    cases the theory rescales); the scaled configuration remains an
    equilibrium of the correspondingly scaled problem.
    """
    zeros = [complex(z) for z in zeros]
    if not zeros:
        raise ValueError("zeros must be nonempty")
    if r.pole_terms:
        raise NonMonomialConstraint("constraint has pole terms")
    nonzero = [(k, c) for k, c in enumerate(r.poly_part.coeffs) if c != 0]
    if len(nonzero) != 1 or nonzero[0][0] < 1:
        raise NonMonomialConstraint("constraint is not a single positive power")
    k, c = nonzero[0]
    current = c * sum(z**k for z in zeros)
    if abs(current) == 0.0:
        raise NonMonomialConstraint("current level vanishes; scale undetermined")
    s = (complex(target_level) / current) ** (1.0 / k)
    return s, [s * z for z in zeros]
