"""Scaling benchmark: wall time of a full solve against the number of roots."""

from __future__ import annotations

import logging
import math
import os
import statistics
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .errors import AtomCauchyError
from .solver import evaluate_solution, solve_with_roots
from .terms import Expression, Term, Trig

log = logging.getLogger(__name__)

THREADS_ENV = "ATOMCAUCHY_THREADS"


@dataclass(frozen=True)
class BenchConfig:
    n_min: int = 2
    n_max: int = 50
    trials: int = 3
    root_range: tuple = (-5.0, 5.0)
    seed: int = 0
    separation: float = 0.1
    grid_points: int = 100
    x_range: tuple = (0.5, 5.0)

    def __post_init__(self):
        if not 2 <= self.n_min <= self.n_max:
            raise ValueError("need 2 <= n_min <= n_max")
        if self.trials < 0:
            raise ValueError("trials must be non-negative")
        lo, hi = self.root_range
        if (hi - lo) < self.separation * (self.n_max - 1):
            raise ValueError("root range too narrow for n_max roots at the requested separation")


def sample_roots(n, rng, root_range, separation):
    """n uniform roots, each redrawn until it is ``separation`` away from the others."""
    lo, hi = root_range
    roots = []
    while len(roots) < n:
        r = rng.uniform(lo, hi)
        if all(abs(r - s) >= separation for s in roots):
            roots.append(float(r))
    return sorted(roots)


def bench_rhs(roots) -> Expression:
    """x^p sin x with p = ceil(max root) + 2, so every integral converges."""
    p = math.ceil(max(roots)) + 2
    return Expression((Term(1, p, 0, Trig.SIN),))


def time_solve(roots, g, grid):
    start = time.perf_counter()
    y = solve_with_roots(roots, g)
    evaluate_solution(y, grid)
    return time.perf_counter() - start


def _bench_one(n, config):
    rng = np.random.default_rng([config.seed, n])
    roots = sample_roots(n, rng, config.root_range, config.separation)
    g = bench_rhs(roots)
    grid = np.linspace(*config.x_range, config.grid_points)
    times = []
    for _ in range(config.trials):
        try:
            times.append(time_solve(roots, g, grid))
        except AtomCauchyError as exc:
            log.warning("n=%d: trial failed: %s", n, exc)
    return n, (statistics.median(times) if times else math.nan)


def run_bench(config: BenchConfig, threads=None):
    """``[(n, median seconds), ...]`` for n in [n_min, n_max]; empty when trials == 0."""
    if config.trials == 0:
        return []
    if threads is None:
        threads = int(os.environ.get(THREADS_ENV, "1"))
    ns = range(config.n_min, config.n_max + 1)
    if threads <= 1:
        rows = [_bench_one(n, config) for n in ns]
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            rows = list(pool.map(lambda n: _bench_one(n, config), ns))
    return sorted(rows)


def loglog_slope(rows):
    """Least-squares slope of log(seconds) against log(n); NaN if undefined."""
    pts = [(n, t) for n, t in rows if t > 0 and math.isfinite(t)]
    if len({n for n, _ in pts}) < 2:
        log.warning("log-log slope needs at least two distinct n; reporting NaN")
        return math.nan
    x = np.log([n for n, _ in pts])
    y = np.log([t for _, t in pts])
    slope, _ = np.polyfit(x, y, 1)
    return float(slope)
