"""Logarithmic energy, complex gradients, and constrained equilibria.

The critical-point system solved here is

    G_k(X) := sum_j nu_j/(x_k - a_j) + sum_{i != k} 1/(x_k - x_i)
            = lambda * r'(x_k),        k = 1..n,
    sum_k r(x_k) = level,

a holomorphic square system in (X, lambda), attacked with damped Newton
from Stieltjes-placement seeds and random multistarts.  The sign
convention ties the multiplier to the energy through
grad_R L = -conj(G) on the real slice.
"""

from __future__ import annotations

import cmath
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from enum import Enum
from itertools import combinations

import numpy as np

from .constraint_extract import ChargeProblem, Constraint
from .errors import (
    ArrangementHit,
    ComplexDataUnsupported,
    LameForgeError,
    NonConvergence,
    NotCritical,
    NotRealAxisProblem,
    PoleHit,
    StepIntoArrangement,
)
from .polycore import RationalFn
from .settings import DEFAULT_SETTINGS, NumericSettings


class SolutionKind(Enum):
    UNCONSTRAINED = "Unconstrained"
    CONSTRAINED = "Constrained"


class CriticalKind(Enum):
    LOCAL_MIN = "LocalMin"
    SADDLE = "Saddle"
    DEGENERATE = "Degenerate"


@dataclass(frozen=True)
class Configuration:
    positions: tuple = ()

    def __post_init__(self):
        object.__setattr__(
            self, "positions", tuple(complex(x) for x in self.positions)
        )

    def __len__(self):
        return len(self.positions)


@dataclass(frozen=True)
class EquilibriumSolution:
    positions: tuple
    lam: complex | None
    grad_residual: float
    constraint_residual: float | None
    energy: float
    kind: SolutionKind

    def sorted_positions(self) -> tuple:
        return tuple(sorted(self.positions, key=lambda z: (z.real, z.imag)))


@dataclass(frozen=True)
class SolverOptions:
    tol: float = 1e-11
    max_iter: int = 200
    min_step: float = 1e-12
    random_starts: int = 32
    seed: int = 42
    threads: int = 1


def check_off_arrangement(problem: ChargeProblem, positions,
                          settings: NumericSettings = DEFAULT_SETTINGS) -> None:
    """Raise ArrangementHit if two points or a point and a charge collide."""
    sep = settings.arrangement_separation
    pos = [complex(x) for x in positions]
    for i, x in enumerate(pos):
        for a, _ in problem.charges:
            if abs(x - a) <= sep:
                raise ArrangementHit(f"movable point {x} hits fixed charge at {a}")
        for j in range(i):
            if abs(x - pos[j]) <= sep:
                raise ArrangementHit(f"movable points {x} and {pos[j]} collide")


def _off_arrangement(problem, positions, r: RationalFn | None, settings) -> bool:
    try:
        check_off_arrangement(problem, positions, settings)
    except ArrangementHit:
        return False
    if r is not None:
        for x in positions:
            for p in r.poles():
                if abs(x - p) <= settings.pole_hit:
                    return False
    return True


# ---------------------------------------------------------------------------
# energy and gradients


def energy(problem: ChargeProblem, cfg: Configuration,
           settings: NumericSettings = DEFAULT_SETTINGS) -> float:
    """-log|F(X)| with F the master product; real for complex strengths too."""
    check_off_arrangement(problem, cfg.positions, settings)
    total = 0.0
    for x in cfg.positions:
        for a, nu in problem.charges:
            total -= (nu * cmath.log(x - a)).real
    pos = cfg.positions
    for i in range(len(pos)):
        for k in range(i):
            total -= math.log(abs(pos[i] - pos[k]))
    return total


def complex_gradient(problem: ChargeProblem, cfg: Configuration,
                     settings: NumericSettings = DEFAULT_SETTINGS) -> list[complex]:
    """G_k = sum_j nu_j/(x_k - a_j) + sum_{i != k} 1/(x_k - x_i)."""
    check_off_arrangement(problem, cfg.positions, settings)
    return _gradient(problem, np.asarray(cfg.positions, dtype=complex)).tolist()


def _gradient(problem: ChargeProblem, x: np.ndarray) -> np.ndarray:
    n = len(x)
    g = np.zeros(n, dtype=complex)
    for a, nu in problem.charges:
        g += nu / (x - a)
    if n > 1:
        diff = x[:, None] - x[None, :]
        np.fill_diagonal(diff, 1.0)
        inv = 1.0 / diff
        np.fill_diagonal(inv, 0.0)
        g += inv.sum(axis=1)
    return g


def finite_difference_gradient(problem: ChargeProblem, cfg: Configuration,
                               h: float = 1e-6,
                               settings: NumericSettings = DEFAULT_SETTINGS
                               ) -> list[complex]:
    """Central-difference oracle for complex_gradient.

    Differences of the energy in the real and imaginary directions are
    packaged as f = dL/du + i dL/dv; on the real slice of a pluriharmonic
    energy this equals -conj(G), so -conj(f) is returned and matches
    complex_gradient directly.
    """
    if not (1e-8 <= h <= 1e-4):
        raise ValueError("step h must lie in [1e-8, 1e-4]")
    check_off_arrangement(problem, cfg.positions, settings)
    out = []
    pos = list(cfg.positions)
    for k in range(len(pos)):
        def shifted(delta: complex) -> float:
            pts = list(pos)
            pts[k] = pts[k] + delta
            return energy(problem, Configuration(tuple(pts)), settings)

        du = (shifted(h) - shifted(-h)) / (2 * h)
        dv = (shifted(1j * h) - shifted(-1j * h)) / (2 * h)
        out.append(-complex(du, dv).conjugate())
    return out


def lagrange_residual(problem: ChargeProblem, constraint: Constraint,
                      cfg: Configuration, lam: complex,
                      settings: NumericSettings = DEFAULT_SETTINGS
                      ) -> tuple[list[complex], complex]:
    """Vector G_k - lambda r'(x_k) and scalar sum r(x_k) - level."""
    check_off_arrangement(problem, cfg.positions, settings)
    r = constraint.r
    rp = r.derive()
    x = np.asarray(cfg.positions, dtype=complex)
    for xi in x:
        for p in r.poles():
            if abs(xi - p) <= settings.pole_hit:
                raise PoleHit(f"point {xi} hits pole {p}")
    vec = _gradient(problem, x) - lam * np.array([rp(v) for v in x])
    level = constraint.level if constraint.level is not None else 0j
    scalar = sum(r(v) for v in x) - level
    return [complex(v) for v in vec], complex(scalar)


def fit_multiplier(problem: ChargeProblem, r: RationalFn, cfg: Configuration,
                   settings: NumericSettings = DEFAULT_SETTINGS) -> complex:
    """Least-squares lambda from G_k ~ lambda r'(x_k)."""
    x = np.asarray(cfg.positions, dtype=complex)
    g = _gradient(problem, x)
    rp = np.array([r.derive()(v) for v in x])
    denom = np.vdot(rp, rp)
    if abs(denom) < 1e-300:
        return 0j
    return complex(np.vdot(rp, g) / denom)


# ---------------------------------------------------------------------------
# Newton solver


def _system(problem, x, r, rp, rpp, lam, level):
    """Residual and Jacobian of the (possibly bordered) critical system."""
    n = len(x)
    g = _gradient(problem, x)
    jac = np.zeros((n, n), dtype=complex)
    diag = np.zeros(n, dtype=complex)
    for a, nu in problem.charges:
        diag += -nu / (x - a) ** 2
    if n > 1:
        diff = x[:, None] - x[None, :]
        np.fill_diagonal(diff, 1.0)
        inv2 = 1.0 / diff**2
        np.fill_diagonal(inv2, 0.0)
        jac += inv2
        diag += -inv2.sum(axis=1)
    jac[np.diag_indices(n)] = diag
    if r is None:
        return g, jac
    rpx = np.array([rp(v) for v in x])
    res = g - lam * rpx
    jac[np.diag_indices(n)] -= lam * np.array([rpp(v) for v in x])
    if level is None:
        return res, jac
    # bordered system: constraint row and multiplier column
    full = np.zeros((n + 1, n + 1), dtype=complex)
    full[:n, :n] = jac
    full[:n, n] = -rpx
    full[n, :n] = rpx
    resv = np.concatenate([res, [sum(r(v) for v in x) - level]])
    return resv, full


def _newton(problem, x0, r, rp, rpp, lam0, level, opts, settings):
    """Damped complex Newton; returns (x, lam, grad_res, cons_res)."""
    x = np.asarray(x0, dtype=complex)
    n = len(x)
    lam = lam0
    bordered = level is not None

    def residual(xv, lv):
        res, _ = _system(problem, xv, r, rp, rpp, lv, level)
        return res

    res, jac = _system(problem, x, r, rp, rpp, lam, level)
    for _ in range(opts.max_iter):
        if np.max(np.abs(res)) < opts.tol:
            break
        try:
            step = np.linalg.solve(jac, -res)
        except np.linalg.LinAlgError:
            step = np.linalg.lstsq(jac, -res, rcond=None)[0]
        if not np.all(np.isfinite(step)):
            raise NonConvergence("Newton step is not finite")
        base = float(np.linalg.norm(res))
        s = 1.0
        while True:
            if bordered:
                cand_x = x + s * step[:n]
                cand_lam = lam + s * step[n]
            else:
                cand_x = x + s * step
                cand_lam = lam
            if _off_arrangement(problem, cand_x, r, settings):
                cand_res = residual(cand_x, cand_lam)
                if float(np.linalg.norm(cand_res)) < base:
                    x, lam, res = cand_x, cand_lam, cand_res
                    _, jac = _system(problem, x, r, rp, rpp, lam, level)
                    break
            s *= 0.5
            if s < opts.min_step:
                if not _off_arrangement(problem, x + s * 2 * step[:n] if bordered
                                        else x + s * 2 * step, r, settings):
                    raise StepIntoArrangement(
                        "line search cannot avoid the arrangement"
                    )
                raise NonConvergence("line search stalled")
    else:
        raise NonConvergence(f"no convergence in {opts.max_iter} iterations")

    res, _ = _system(problem, x, r, rp, rpp, lam, level)
    if bordered:
        return x, lam, float(np.max(np.abs(res[:n]))), float(abs(res[n]))
    return x, lam, float(np.max(np.abs(res))), None


def solve_equilibrium(problem: ChargeProblem, constraint: Constraint | None,
                      init: Configuration, opts: SolverOptions = SolverOptions(),
                      settings: NumericSettings = DEFAULT_SETTINGS
                      ) -> EquilibriumSolution:
    """Damped Newton on the critical system from a single start.

    With a constraint the unknowns are (X, lambda) and the initial
    multiplier comes from a least-squares fit of G against r' at the
    start; without one the system is the classical G = 0.
    """
    n = problem.movable_count
    if len(init.positions) != n:
        raise ValueError(f"init has {len(init.positions)} points, expected {n}")
    if n == 0:
        cres = None
        lam = None
        if constraint is not None:
            level = constraint.level if constraint.level is not None else 0j
            cres = float(abs(level))
        return EquilibriumSolution((), lam, 0.0, cres, 0.0,
                                   SolutionKind.CONSTRAINED if constraint
                                   else SolutionKind.UNCONSTRAINED)
    check_off_arrangement(problem, init.positions, settings)
    if constraint is None:
        x, _, gres, _ = _newton(problem, init.positions, None, None, None,
                                None, None, opts, settings)
        e = energy(problem, Configuration(tuple(x)), settings)
        return EquilibriumSolution(tuple(complex(v) for v in x), None, gres,
                                   None, e, SolutionKind.UNCONSTRAINED)
    r = constraint.r
    level = constraint.level if constraint.level is not None else 0j
    lam0 = fit_multiplier(problem, r, init, settings)
    rp = r.derive()
    rpp = rp.derive()
    x, lam, gres, cres = _newton(problem, init.positions, r, rp, rpp,
                                 lam0, level, opts, settings)
    e = energy(problem, Configuration(tuple(x)), settings)
    return EquilibriumSolution(tuple(complex(v) for v in x), complex(lam),
                               gres, cres, e, SolutionKind.CONSTRAINED)


def solve_bethe_system(problem: ChargeProblem, r_prime: RationalFn,
                       multiplier: complex, init: Configuration,
                       opts: SolverOptions = SolverOptions(),
                       settings: NumericSettings = DEFAULT_SETTINGS
                       ) -> EquilibriumSolution:
    """Solve G_k = multiplier * r'(x_k) with the multiplier held fixed.

    This is the square system a degenerate Lame equation induces on the
    zeros of its polynomial solutions (the constraint level is then
    whatever sum r(x_k) evaluates to).
    """
    n = problem.movable_count
    if n == 0:
        return EquilibriumSolution((), complex(multiplier), 0.0, 0.0, 0.0,
                                   SolutionKind.CONSTRAINED)
    check_off_arrangement(problem, init.positions, settings)
    rf = RationalFn(r_prime.poly_part, r_prime.pole_terms)
    rpp = rf.derive()
    x, _, gres, _ = _newton(problem, init.positions, rf, rf, rpp,
                            complex(multiplier), None, opts, settings)
    e = energy(problem, Configuration(tuple(x)), settings)
    return EquilibriumSolution(tuple(complex(v) for v in x), complex(multiplier),
                               gres, 0.0, e, SolutionKind.CONSTRAINED)


# ---------------------------------------------------------------------------
# seeding and enumeration


def stieltjes_seeds(problem: ChargeProblem, n: int,
                    settings: NumericSettings = DEFAULT_SETTINGS
                    ) -> list[Configuration]:
    """One seed per weak composition of n into the finite gaps.

    Requires real charge locations and positive real strengths; points in
    a gap sit at Chebyshev-like nodes, strictly interior.
    """
    for a, nu in problem.charges:
        if abs(a.imag) > settings.real_data_tol:
            raise NotRealAxisProblem(f"charge location {a} is not real")
        if abs(nu.imag) > settings.real_data_tol or nu.real <= 0:
            raise NotRealAxisProblem(f"charge strength {nu} is not positive real")
    if n == 0:
        return [Configuration(())]
    locs = sorted(a.real for a, _ in problem.charges)
    p = len(locs) - 1
    if p < 1:
        return []
    seeds = []
    for comp in _weak_compositions(n, p):
        pts: list[complex] = []
        for gap, k in enumerate(comp):
            if k == 0:
                continue
            lo, hi = locs[gap], locs[gap + 1]
            mid, half = (lo + hi) / 2.0, (hi - lo) / 2.0
            for j in range(1, k + 1):
                pts.append(complex(mid - half * math.cos((2 * j - 1) * math.pi / (2 * k))))
        seeds.append(Configuration(tuple(pts)))
    return seeds


def _weak_compositions(n: int, parts: int):
    """Weak compositions of n into `parts` ordered slots (stars and bars)."""
    for bars in combinations(range(n + parts - 1), parts - 1):
        comp = []
        prev = -1
        for b in bars:
            comp.append(b - prev - 1)
            prev = b
        comp.append(n + parts - 1 - prev - 1)
        yield tuple(comp)


def _random_configurations(problem, n, count, rng, r, settings):
    locs = [a for a, _ in problem.charges]
    center = sum(locs) / len(locs) if locs else 0j
    radius = 2.0 * (1.0 + max((abs(a) for a in locs), default=0.0))
    out = []
    attempts = 0
    while len(out) < count and attempts < 50 * max(count, 1):
        attempts += 1
        rad = radius * np.sqrt(rng.uniform(0, 1, n))
        ang = rng.uniform(0, 2 * np.pi, n)
        pts = center + rad * np.exp(1j * ang)
        if _off_arrangement(problem, pts, r, settings):
            out.append(Configuration(tuple(complex(v) for v in pts)))
    return out


def _dedupe(solutions, tol):
    unique: list[EquilibriumSolution] = []
    dup = 0
    for sol in solutions:
        key = np.asarray(sol.sorted_positions(), dtype=complex)
        matched = False
        for kept in unique:
            ref = np.asarray(kept.sorted_positions(), dtype=complex)
            if len(ref) == len(key) and (len(key) == 0 or
                                         np.max(np.abs(ref - key)) < tol):
                matched = True
                dup += 1
                break
        if not matched:
            unique.append(sol)
    return unique, dup


def _sort_solutions(solutions):
    def keyfn(s):
        pos = s.sorted_positions()
        return (round(s.energy, 9),) + tuple((z.real, z.imag) for z in pos)

    return sorted(solutions, key=keyfn)


def enumerate_equilibria(problem: ChargeProblem, constraint: Constraint | None,
                         opts: SolverOptions = SolverOptions(),
                         settings: NumericSettings = DEFAULT_SETTINGS,
                         full_output: bool = False):
    """Multistart solve: Stieltjes seeds when applicable plus random starts.

    Non-converged starts are dropped (and counted in the diagnostics);
    converged solutions are deduplicated as multisets of positions and
    sorted by energy, then lexicographically.
    """
    n = problem.movable_count
    r = constraint.r if constraint is not None else None
    try:
        seeds = stieltjes_seeds(problem, n, settings)
    except NotRealAxisProblem:
        seeds = []
    seeds = [s for s in seeds if _off_arrangement(problem, s.positions, r, settings)]
    rng = np.random.default_rng(opts.seed)
    if n > 0:
        seeds = seeds + _random_configurations(problem, n, opts.random_starts,
                                               rng, r, settings)
    elif not seeds:
        seeds = [Configuration(())]

    def attempt(seed):
        try:
            return solve_equilibrium(problem, constraint, seed, opts, settings)
        except (LameForgeError, np.linalg.LinAlgError):
            return None

    if opts.threads > 1:
        with ThreadPoolExecutor(max_workers=opts.threads) as pool:
            results = list(pool.map(attempt, seeds))
    else:
        results = [attempt(s) for s in seeds]
    converged = [s for s in results if s is not None]
    unique, dup = _dedupe(converged, settings.dedupe_tol)
    unique = _sort_solutions(unique)
    if not full_output:
        return unique
    p = len(problem.charges) - 1
    diagnostics = {
        "seeds_total": len(seeds),
        "converged": len(converged),
        "failed": len(seeds) - len(converged),
        "duplicates": dup,
        "heine_bound": math.comb(n + p - 1, n) if p >= 1 else None,
    }
    return unique, diagnostics


# ---------------------------------------------------------------------------
# classification


def _real_slice_hessian(problem, x, settings):
    """Hessian of the energy restricted to real positions.

    Valid for real charge data or for charge sets closed under complex
    conjugation (the entries then come out real).
    """
    n = len(x)
    h = np.zeros((n, n), dtype=complex)
    for k in range(n):
        for a, nu in problem.charges:
            h[k, k] += nu / (x[k] - a) ** 2
        for i in range(n):
            if i == k:
                continue
            h[k, k] += 1.0 / (x[k] - x[i]) ** 2
            h[k, i] = -1.0 / (x[k] - x[i]) ** 2
    if np.max(np.abs(h.imag)) > 1e-8 * (1.0 + np.max(np.abs(h.real))):
        raise ComplexDataUnsupported("real-slice Hessian has complex entries")
    return h.real


def classify_critical_point(problem: ChargeProblem, constraint: Constraint | None,
                            sol: EquilibriumSolution,
                            settings: NumericSettings = DEFAULT_SETTINGS
                            ) -> CriticalKind:
    """Eigenvalue-sign classification of a real equilibrium.

    Constrained solutions are judged through the Hessian of the Lagrange
    function restricted to the constraint tangent space; the Bethe
    multiplier lambda enters with a plus sign because grad_R L = -conj(G)
    while the solver fits G = lambda r'.
    """
    if sol.grad_residual > settings.classify_residual_tol:
        raise NotCritical(f"gradient residual {sol.grad_residual:.3e} too large")
    x = np.asarray(sol.positions, dtype=complex)
    if len(x) == 0:
        return CriticalKind.DEGENERATE
    if np.max(np.abs(x.imag)) > settings.real_data_tol:
        raise ComplexDataUnsupported("positions are not real")
    xr = x.real.astype(complex)
    h = _real_slice_hessian(problem, xr, settings)
    if constraint is not None:
        if sol.lam is None:
            raise ValueError("constrained classification needs the multiplier")
        if abs(complex(sol.lam).imag) > settings.real_data_tol:
            raise ComplexDataUnsupported("multiplier is not real")
        if sol.constraint_residual is not None and \
                sol.constraint_residual > settings.classify_residual_tol:
            raise NotCritical("constraint residual too large")
        rp = constraint.r.derive()
        rpp = rp.derive()
        rpv = np.array([rp(v) for v in xr])
        rppv = np.array([rpp(v) for v in xr])
        if max(np.max(np.abs(rpv.imag)), np.max(np.abs(rppv.imag))) > 1e-8:
            raise ComplexDataUnsupported("constraint is not real on the real line")
        h = h + complex(sol.lam).real * np.diag(rppv.real)
        n = len(xr)
        if n == 1:
            return CriticalKind.LOCAL_MIN  # zero-dimensional tangent space
        q, _ = np.linalg.qr(rpv.real.reshape(-1, 1), mode="complete")
        z = q[:, 1:]
        h = z.T @ h @ z
    eigs = np.linalg.eigvalsh((h + h.T) / 2.0)
    thresh = settings.eig_threshold * max(1.0, float(np.max(np.abs(eigs))))
    if np.any(np.abs(eigs) < thresh):
        return CriticalKind.DEGENERATE
    if np.all(eigs > 0):
        return CriticalKind.LOCAL_MIN
    return CriticalKind.SADDLE
