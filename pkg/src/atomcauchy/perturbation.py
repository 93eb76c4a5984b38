"""Stability of y_p under perturbed characteristic roots.

Every root r_i is replaced by r_i + eps while the atom weights stay those of
the exact roots, and the pointwise gap |y_p - y_p,eps| is sampled on a
compact interval.  The gap is bounded by C_K * eps / (beta - eps) with
beta = min_i (alpha - r_i), alpha the growth exponent of g.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Optional

import numpy as np

from ._numeric import real_part
from .charpoly import EulerEquation, build_charpoly
from .errors import BoundViolation
from .integral import verify_growth
from .roots import find_roots
from .solver import ParticularSolution, evaluate_solution, solve_with_roots
from .terms import Expression, leading_power

DEFAULT_COMPACT = (1.0, 2.0)
DEFAULT_GRID = 512
DEFAULT_LEVELS = 5
STUDY_TOL = 1e-13


def epsilon_schedule(seed: int, levels: int = DEFAULT_LEVELS):
    """``c * 10**-j`` for j = 1..levels with one c drawn uniformly from (-1, 1)."""
    rng = np.random.default_rng(seed)
    c = rng.uniform(-1.0, 1.0)
    return tuple(c * 10.0**-j for j in range(1, levels + 1))


def gap_beta(g: Expression, roots) -> float:
    """beta = min_i (alpha - Re r_i), alpha being the lowest power of g."""
    alpha = leading_power(g)
    return float(min(alpha - real_part(r) for r in roots))


def _root_offsets(roots, seed, per_root):
    if not per_root:
        return [1.0] * len(roots)
    rng = np.random.default_rng(seed)
    draws = {}
    offsets = []
    for r in roots:
        # conjugate pairs share one draw so the perturbed set stays real
        key = (real_part(r), abs(complex(r).imag))
        if key not in draws:
            draws[key] = rng.uniform(-1.0, 1.0)
        offsets.append(draws[key])
    return offsets


def perturbed_solution(
    eq: EulerEquation,
    g: Expression,
    eps: float,
    seed: Optional[int] = None,
    *,
    per_root: bool = False,
    roots=None,
) -> ParticularSolution:
    """y_p,eps: exponents r_i + eps (or r_i + eps * c_i per root), weights A(r_i) unchanged."""
    if roots is None:
        roots = find_roots(build_charpoly(eq)).roots
    beta = gap_beta(g, roots)
    if abs(eps) >= beta:
        raise BoundViolation(f"|eps| = {abs(eps):g} must stay below beta = {beta:g}")
    base = solve_with_roots(roots, g, equation=eq)
    if eps == 0:
        return base
    offsets = _root_offsets(roots, seed, per_root)
    moved = [r + eps * c for r, c in zip(roots, offsets)]
    return solve_with_roots(moved, g, weights=base.weights, equation=eq)


@dataclass(frozen=True)
class ErrorCurves:
    grid: np.ndarray
    epsilons: tuple
    errors: np.ndarray

    @property
    def sup_norms(self):
        return self.errors.max(axis=1) if self.errors.size else np.zeros(len(self.epsilons))


@dataclass(frozen=True)
class BoundFit:
    alpha: float
    beta: float
    C_K: float
    check: bool


@dataclass(frozen=True)
class PerturbationStudy:
    equation: EulerEquation
    rhs: Expression
    epsilons: tuple
    compact: tuple = DEFAULT_COMPACT
    seed: int = 0
    grid_points: int = DEFAULT_GRID
    per_root: bool = False
    tol: float = STUDY_TOL
    curves: Optional[ErrorCurves] = None
    bound: Optional[BoundFit] = None

    def __post_init__(self):
        k0, k1 = self.compact
        if not 0 < k0 < k1:
            raise ValueError(f"compact interval must satisfy 0 < k0 < k1, got {self.compact}")
        object.__setattr__(self, "epsilons", tuple(float(e) for e in self.epsilons))


def error_curve(study: PerturbationStudy) -> ErrorCurves:
    """|y_p - y_p,eps| on a uniform grid over the compact set, one row per eps."""
    roots = find_roots(build_charpoly(study.equation)).roots
    grid = np.linspace(*study.compact, study.grid_points)
    exact = evaluate_solution(solve_with_roots(roots, study.rhs, equation=study.equation), grid, study.tol)
    rows = []
    for eps in study.epsilons:
        y = perturbed_solution(
            study.equation, study.rhs, eps, study.seed, per_root=study.per_root, roots=roots
        )
        rows.append(np.abs(exact - evaluate_solution(y, grid, study.tol)))
    errors = np.array(rows) if rows else np.zeros((0, len(grid)))
    return ErrorCurves(grid, study.epsilons, errors)


def fit_bound(curves: ErrorCurves, beta: float, alpha: float = math.nan) -> BoundFit:
    """Empirical C_K = max_j sup|err_j| (beta - |eps_j|) / |eps_j|.

    ``check`` holds when that constant is finite and the per-level estimates
    agree within a factor of 10.
    """
    if len(curves.epsilons) < 3:
        raise ValueError("fitting the bound needs at least three epsilon levels")
    estimates = [
        s * (beta - abs(e)) / abs(e) for e, s in zip(curves.epsilons, curves.sup_norms) if e != 0
    ]
    if not estimates:
        raise ValueError("all epsilon levels are zero")
    c_k = float(max(estimates))
    positive = [v for v in estimates if v > 0]
    stable = bool(positive) and max(positive) <= 10 * min(positive) and len(positive) == len(estimates)
    return BoundFit(alpha, beta, c_k, bool(np.isfinite(c_k)) and stable)


def run_study(
    eq: EulerEquation,
    g: Expression,
    epsilons=None,
    *,
    compact=DEFAULT_COMPACT,
    seed: int = 0,
    grid_points: int = DEFAULT_GRID,
    per_root: bool = False,
    tol: float = STUDY_TOL,
) -> PerturbationStudy:
    """Build the study, compute its error curves and fit the bound."""
    if epsilons is None:
        epsilons = epsilon_schedule(seed)
    study = PerturbationStudy(eq, g, tuple(epsilons), tuple(compact), seed, grid_points, per_root, tol)
    roots = find_roots(build_charpoly(eq)).roots
    beta = gap_beta(g, roots)
    for e in study.epsilons:
        if abs(e) >= beta:
            raise BoundViolation(f"|eps| = {abs(e):g} must stay below beta = {beta:g}")
    curves = error_curve(study)
    alpha = verify_growth(g, compact[1]).alpha
    bound = fit_bound(curves, beta, alpha) if len(curves.epsilons) >= 3 else None
    return replace(study, curves=curves, bound=bound)
