"""Angle search: a coarse product grid, then compass (pattern) search.

Objectives are callables taking an :class:`AngleSchedule` and returning the
value to maximize.  If an objective also has ``grid_values(gamma_axis,
beta_axis)`` the grid stage uses it instead of point-by-point calls.

Beyond ``p = 3`` a full grid has too many points, so the first stage draws a
budgeted set of random schedules instead.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .errors import BudgetExceededError, InfeasibleError
from .graph import SubgraphDecomposition
from .qaoa import make_objective
from .statevector import DEFAULT_MAX_QUBITS, AngleSchedule

Objective = Callable[[AngleSchedule], float]

GAMMA_PERIOD = 2 * math.pi
BETA_PERIOD = math.pi


@dataclass
class OptimizationResult:
    best_schedule: AngleSchedule
    best_value: float
    evaluations: int
    grid_resolution: int
    refined: bool = False

    @property
    def p(self) -> int:
        return self.best_schedule.p

    def to_dict(self) -> dict:
        return {
            "p": self.p,
            "gammas": list(self.best_schedule.gammas),
            "betas": list(self.best_schedule.betas),
            "value": self.best_value,
            "evaluations": self.evaluations,
            "grid_resolution": self.grid_resolution,
        }


@dataclass
class OptimizerConfig:
    """Knobs for :func:`maximize`.

    ``resolution`` maps p to grid points per axis; levels missing from it use
    random multistart.  ``symmetric`` narrows the beta window to
    ``[0, pi/2)``, which is exact for MaxCut (flipping every bit leaves C and
    ``|s>`` unchanged) but is off by default.
    """

    resolution: dict[int, int] = field(default_factory=lambda: {1: 64, 2: 24, 3: 10})
    tol: float = 1e-6
    max_grid_evaluations: int = 2_000_000
    max_refine_evaluations: int = 500_000
    multistart_samples: int = 400
    multistart_refine: int = 6
    screen_tol: float = 1e-4
    seed: int = 0
    symmetric: bool = False

    def to_dict(self) -> dict:
        return {
            "resolution": {str(k): v for k, v in sorted(self.resolution.items())},
            "tol": self.tol,
            "max_grid_evaluations": self.max_grid_evaluations,
            "max_refine_evaluations": self.max_refine_evaluations,
            "multistart_samples": self.multistart_samples,
            "multistart_refine": self.multistart_refine,
            "screen_tol": self.screen_tol,
            "seed": self.seed,
            "symmetric": self.symmetric,
        }


class _Counted:
    def __init__(self, fn: Objective):
        self.fn = fn
        self.calls = 0

    def __call__(self, sched: AngleSchedule) -> float:
        self.calls += 1
        return float(self.fn(sched))


def grid_axes(resolution: int, symmetric: bool = False) -> tuple[np.ndarray, np.ndarray]:
    """Half-open axes ``k * period / resolution`` for gamma and beta."""
    beta_period = BETA_PERIOD / 2 if symmetric else BETA_PERIOD
    k = np.arange(resolution)
    return k * (GAMMA_PERIOD / resolution), k * (beta_period / resolution)


def grid_search(
    objective: Objective,
    p: int,
    resolution: int,
    budget: int = 2_000_000,
    symmetric: bool = False,
) -> OptimizationResult:
    """Best point of the ``resolution**(2p)`` grid on ``[0,2pi)^p x [0,pi)^p``.

    Ties go to the lexicographically smallest ``(gammas, betas)`` vector.
    """
    if resolution < 2:
        raise InfeasibleError("grid resolution must be at least 2")
    n_points = resolution ** (2 * p)
    if n_points > budget:
        raise BudgetExceededError(f"{n_points} grid points exceeds budget {budget}")
    gammas, betas = grid_axes(resolution, symmetric)

    def point(idx):
        return AngleSchedule(gammas[list(idx[:p])], betas[list(idx[p:])])

    grid_values = getattr(objective, "grid_values", None)
    if grid_values is not None and getattr(objective, "p", p) == p:
        values = np.asarray(grid_values(gammas, betas))
        # C-order flat index is lexicographic in (gamma idx..., beta idx...).
        best_flat = int(np.flatnonzero(values == values.max())[0])
        idx = np.unravel_index(best_flat, values.shape)
        return OptimizationResult(point(idx), float(values[idx]), n_points, resolution)

    best_idx, best_val = None, -math.inf
    for idx in itertools.product(range(resolution), repeat=2 * p):
        val = float(objective(point(idx)))
        if val > best_val:
            best_idx, best_val = idx, val
    return OptimizationResult(point(best_idx), best_val, n_points, resolution)


def compass_search(
    f: Callable[[np.ndarray], float],
    x0: Sequence[float],
    step: float,
    tol: float,
    max_evaluations: int = 200_000,
    f0: float | None = None,
    rel_floor: float = 1e-13,
) -> tuple[np.ndarray, float, int]:
    """Maximize ``f`` by axis-wise steps of ``+-step``, halving on failure.

    Stops once ``step < tol``.  Returns ``(x, f(x), evaluations)``; the value
    never drops below ``f(x0)``.  Gains below ``rel_floor * max(1, |f|)`` count
    as no gain, so round-off cannot drive the walk along a flat ridge.
    """
    x = np.array(x0, dtype=float)
    evals = 0
    if f0 is None:
        fx = f(x)
        evals += 1
    else:
        fx = f0
    h = float(step)
    while h >= tol:
        improved = False
        for i in range(x.size):
            for sign in (1.0, -1.0):
                y = x.copy()
                y[i] += sign * h
                fy = f(y)
                evals += 1
                if fy > fx + rel_floor * max(1.0, abs(fx)):
                    x, fx, improved = y, fy, True
                    break
            if evals >= max_evaluations:
                raise BudgetExceededError(f"compass search exceeded {max_evaluations} evaluations")
        if not improved:
            h /= 2
    return x, fx, evals


def wrap_schedule(sched: AngleSchedule) -> AngleSchedule:
    """Reduce angles into ``[0, 2pi) x [0, pi)``; the objective is unchanged."""
    return AngleSchedule(
        tuple(g % GAMMA_PERIOD for g in sched.gammas),
        tuple(b % BETA_PERIOD for b in sched.betas),
    )


def refine(
    objective: Objective,
    start: AngleSchedule,
    tol: float = 1e-6,
    step: float = math.pi / 32,
    max_evaluations: int = 200_000,
    start_value: float | None = None,
    wrap: bool = True,
) -> OptimizationResult:
    """Local compass-search ascent from ``start`` down to step size ``tol``."""
    counted = _Counted(objective)
    x, fx, _ = compass_search(
        lambda v: counted(AngleSchedule.from_vector(v)),
        start.as_vector(), step, tol, max_evaluations, start_value,
    )
    best = AngleSchedule.from_vector(x)
    if wrap:
        wrapped = wrap_schedule(best)
        # Keep the wrapped form only if it re-evaluates to the same value.
        if wrapped != best:
            wrapped_value = counted(wrapped)
            if abs(wrapped_value - fx) <= 1e-12:
                best, fx = wrapped, wrapped_value
    return OptimizationResult(best, fx, counted.calls, 0, refined=True)


def random_starts(
    objective: Objective, p: int, samples: int, keep: int, rng: np.random.Generator
) -> tuple[list[tuple[float, AngleSchedule]], int]:
    """Evaluate ``samples`` uniform schedules; return the ``keep`` best."""
    scored = []
    for _ in range(samples):
        sched = AngleSchedule(rng.uniform(0, GAMMA_PERIOD, p), rng.uniform(0, BETA_PERIOD, p))
        scored.append((float(objective(sched)), sched))
    scored.sort(key=lambda t: (-t[0], tuple(t[1].as_vector())))
    return scored[:keep], samples


def maximize(
    objective: Objective,
    p: int,
    config: OptimizerConfig | None = None,
    warm_starts: Sequence[AngleSchedule] = (),
) -> OptimizationResult:
    """Grid (or random multistart) followed by compass refinement.

    ``warm_starts`` are refined as additional candidates; passing the
    previous level's optimum with an identity layer appended guarantees the
    result is no worse than that level.
    """
    config = config or OptimizerConfig()
    evaluations = 0
    candidates: list[tuple[float | None, AngleSchedule, float]] = []
    resolution = config.resolution.get(p)
    if resolution is not None:
        grid = grid_search(objective, p, resolution, config.max_grid_evaluations, config.symmetric)
        evaluations += grid.evaluations
        step = GAMMA_PERIOD / resolution / 2
        candidates.append((grid.best_value, grid.best_schedule, step))
    else:
        rng = np.random.default_rng([config.seed, p])
        best, used = random_starts(
            objective, p, config.multistart_samples, config.multistart_refine, rng
        )
        evaluations += used
        candidates.extend((val, sched, math.pi / 16) for val, sched in best)
        resolution = 0
    candidates.extend((None, s, math.pi / 32) for s in warm_starts)

    # Screen every candidate coarsely, then polish only the winner.
    screen_tol = max(config.screen_tol, config.tol)
    screened: OptimizationResult | None = None
    for value, start, step in candidates:
        res = refine(
            objective, start, screen_tol, step, config.max_refine_evaluations, value, wrap=False
        )
        evaluations += res.evaluations
        if screened is None or res.best_value > screened.best_value:
            screened = res
    assert screened is not None
    final = refine(
        objective, screened.best_schedule, config.tol, screen_tol,
        config.max_refine_evaluations, screened.best_value,
    )
    evaluations += final.evaluations
    return OptimizationResult(final.best_schedule, final.best_value, evaluations, resolution, True)


def maximize_fp(
    target,
    p: int,
    config: OptimizerConfig | None = None,
    previous: OptimizationResult | None = None,
    max_qubits: int | None = None,
) -> OptimizationResult:
    """Estimate M_p for a graph, decomposition or rooted subgraph.

    Graphs use the decomposed objective when subgraph types are smaller than
    the graph.  ``previous`` (a level ``p - 1`` result) is embedded as a warm
    start so that the reported M_p is at least the previous value.
    """
    objective = make_objective(target, p, max_qubits or DEFAULT_MAX_QUBITS)
    warm = []
    if previous is not None:
        if previous.p != p - 1:
            raise InfeasibleError("previous result must come from level p - 1")
        warm.append(previous.best_schedule.extended())
    return maximize(objective, p, config, warm)


def maximize_fp_levels(
    target, p_max: int, config: OptimizerConfig | None = None, max_qubits: int | None = None
) -> list[OptimizationResult]:
    """M_1..M_{p_max}, each level warm-started from the one below."""
    if isinstance(target, SubgraphDecomposition):
        raise InfeasibleError("a decomposition is tied to one level; pass the graph instead")
    results: list[OptimizationResult] = []
    for p in range(1, p_max + 1):
        prev = results[-1] if results else None
        results.append(maximize_fp(target, p, config, prev, max_qubits))
    return results
