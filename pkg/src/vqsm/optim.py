"""Derivative-free parameter optimization with multi-start support.

Adaptive Nelder-Mead (scipy backend) behind a small budgeted interface; points
where the objective raises a numerical error are treated as +inf and never
returned as optima. Runs are deterministic given the seed and start point.
"""

from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize as scipy_minimize

from vqsm.errors import DegenerateGapError, LinearDependenceError


@dataclass
class OptimizerConfig:
    method: str = "nelder-mead"
    max_evals: int = 150000
    restarts: int = 20
    init: str = "uniform"  # "uniform" in (-pi, pi) or "zeros"
    ftol: float = 1e-10
    xtol: float = 1e-8
    seed: int = 0


@dataclass
class MinimizeResult:
    x: np.ndarray
    fun: float
    evals: int
    budget_exhausted: bool = False


@dataclass
class StochasticStudy:
    """Final cost values over restarts with interpolated quantiles."""

    samples: list
    seeds: list
    total_evals: int = 0

    def quantile(self, q):
        return float(np.quantile(self.samples, q))

    @property
    def q10(self):
        return self.quantile(0.10)

    @property
    def q25(self):
        return self.quantile(0.25)

    @property
    def q50(self):
        return self.quantile(0.50)

    @property
    def q75(self):
        return self.quantile(0.75)


class _Budgeted:
    """Wrap an objective: count evaluations, trap numerical errors as +inf,
    remember the best point ever evaluated."""

    def __init__(self, f, max_evals):
        self.f = f
        self.max_evals = max_evals
        self.evals = 0
        self.best_x = None
        self.best_f = np.inf

    def __call__(self, x):
        if self.evals >= self.max_evals:
            raise _BudgetExhausted
        self.evals += 1
        try:
            val = float(self.f(x))
        except (DegenerateGapError, LinearDependenceError):
            val = np.inf
        if not np.isfinite(val):
            val = np.inf
        if val < self.best_f:
            self.best_f = val
            self.best_x = np.array(x, dtype=float)
        return val


class _BudgetExhausted(Exception):
    pass


def minimize(f, x0, cfg: OptimizerConfig = None) -> MinimizeResult:
    """Adaptive Nelder-Mead with simplex restarts until the budget or ftol is hit."""
    if cfg is None:
        cfg = OptimizerConfig()
    x0 = np.asarray(x0, dtype=float)
    wrapped = _Budgeted(f, cfg.max_evals)
    budget_exhausted = False
    x_curr = x0
    f_prev_round = np.inf
    for _ in range(3):  # a few simplex restarts from the running best
        remaining = cfg.max_evals - wrapped.evals
        if remaining <= 0:
            budget_exhausted = True
            break
        try:
            res = scipy_minimize(
                wrapped, x_curr, method="Nelder-Mead",
                options={
                    "maxfev": remaining,
                    "fatol": cfg.ftol,
                    "xatol": cfg.xtol,
                    "adaptive": x0.size > 4,
                },
            )
            x_curr = res.x
        except _BudgetExhausted:
            budget_exhausted = True
            break
        if wrapped.best_f > f_prev_round - cfg.ftol:
            break
        f_prev_round = wrapped.best_f
    if wrapped.best_x is None:
        wrapped.best_x = x0
        wrapped.best_f = np.inf
    if wrapped.evals >= cfg.max_evals:
        budget_exhausted = True
    return MinimizeResult(
        x=wrapped.best_x, fun=wrapped.best_f, evals=wrapped.evals,
        budget_exhausted=budget_exhausted,
    )


def initial_point(dim, cfg: OptimizerConfig, rng):
    if cfg.init == "zeros":
        return np.zeros(dim)
    return rng.uniform(-np.pi, np.pi, size=dim)


def multi_start(f, dim, cfg: OptimizerConfig = None):
    """Independent seeded minimizations; returns (best result, StochasticStudy)."""
    if cfg is None:
        cfg = OptimizerConfig()
    best = None
    samples, seeds = [], []
    total_evals = 0
    for k in range(cfg.restarts):
        seed = cfg.seed + k
        rng = np.random.default_rng(seed)
        x0 = initial_point(dim, cfg, rng)
        res = minimize(f, x0, cfg)
        samples.append(res.fun)
        seeds.append(seed)
        total_evals += res.evals
        if best is None or res.fun < best.fun:
            best = res
    return best, StochasticStudy(samples=samples, seeds=seeds, total_evals=total_evals)
