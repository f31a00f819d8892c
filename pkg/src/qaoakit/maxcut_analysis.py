"""Approximation-ratio analysis on 2- and 3-regular graphs.

On the ring every edge has the same neighborhood, a path of ``2p + 2``
vertices, so ``M_p / n`` is the maximum of a single ``f_g``.

On a 3-regular graph with ``S`` crossed squares and ``T`` isolated triangles
the level-1 expected cut is a fixed combination of three subgraph functions::

    F_1 = S f4 + (4S + 3T) f5 + (3n/2 - 5S - 3T) f6

and every crossed square and isolated triangle forces one uncut edge, so the
best cut is at most ``3n/2 - S - T``.  Dividing by ``n`` leaves a function of
the densities ``s = S/n`` and ``t = T/n`` on ``s, t >= 0, 4s + 3t <= 1``.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .errors import InfeasibleError, SpecialCaseError
from .graph import (
    Graph,
    RootedSubgraph,
    count_crossed_squares,
    count_isolated_triangles,
    decompose,
    is_k4,
)
from .optimizer import OptimizationResult, OptimizerConfig, compass_search, maximize, maximize_fp
from .qaoa import SubgraphObjective
from .statevector import AngleSchedule, cut_values

# Level-1 neighborhoods in a 3-regular graph; root edge is (0, 1) throughout.
# Crossed square seen from its diagonal: 2 and 3 are the other corners.
G4 = RootedSubgraph(Graph.from_edges(4, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3)]))
# Triangle 0-1-2 with one outside leg on each root endpoint (3 on 0, 4 on 1).
G5 = RootedSubgraph(Graph.from_edges(5, [(0, 1), (0, 2), (1, 2), (0, 3), (1, 4)]))
# Double star: 0 has leaves 2, 3 and 1 has leaves 4, 5.
G6 = RootedSubgraph(Graph.from_edges(6, [(0, 1), (0, 2), (0, 3), (1, 4), (1, 5)]))
# Level-2 tree: children 2, 3 of 0 and 4, 5 of 1, each with two leaves.
G14 = RootedSubgraph(
    Graph.from_edges(
        14,
        [(0, 1), (0, 2), (0, 3), (1, 4), (1, 5),
         (2, 6), (2, 7), (3, 8), (3, 9), (4, 10), (4, 11), (5, 12), (5, 13)],
    ),
    p=2,
)


def max_cut_brute_force(g: Graph) -> int:
    """Largest cut by enumerating all ``2**n`` assignments (n <= 24)."""
    if g.n_vertices > 24:
        raise InfeasibleError("brute-force max cut is limited to 24 vertices")
    if g.n_vertices == 0:
        return 0
    return int(cut_values(g.n_vertices, g.edges).max())


# -- ring of disagrees ----------------------------------------------------------


def ring_segment_objective(n: int, p: int) -> SubgraphObjective:
    from .graph import ring_graph

    if n <= 2 * p + 2:
        raise InfeasibleError(f"ring of {n} vertices has more than one subgraph type at p={p}")
    d = decompose(ring_graph(n), p)
    (entry,) = d.entries.values()
    return SubgraphObjective(entry.subgraph, p)


def ring_mp(
    n: int,
    p: int,
    config: OptimizerConfig | None = None,
    previous: OptimizationResult | None = None,
) -> tuple[float, OptimizationResult]:
    """``(M_p, result)`` for the n-ring; ``result`` holds the per-edge optimum."""
    objective = ring_segment_objective(n, p)
    warm = [previous.best_schedule.extended()] if previous is not None else []
    result = maximize(objective, p, config, warm)
    return n * result.best_value, result


# -- 3-regular level-1 analysis -----------------------------------------------


def check_densities(s: float, t: float) -> None:
    if s < 0 or t < 0 or 4 * s + 3 * t > 1 + 1e-12:
        raise InfeasibleError(f"(s, t) = ({s}, {t}) outside s, t >= 0, 4s + 3t <= 1")


def density_weights(s: float, t: float) -> tuple[float, float, float]:
    return s, 4 * s + 3 * t, 1.5 - 5 * s - 3 * t


class F1Density:
    """``F_1 / n`` as a function of the angles, for fixed ``(s, t)``.

    Grid values of the three subgraph functions are computed once per grid
    and shared by every ``(s, t)`` that uses the same instance.
    """

    p = 1

    def __init__(self, s: float, t: float, parts: "_F1Parts | None" = None):
        check_densities(s, t)
        self.s, self.t = s, t
        self.parts = parts or _F1Parts()
        self.weights = density_weights(s, t)

    def __call__(self, sched: AngleSchedule) -> float:
        return float(np.dot(self.weights, self.parts.values(sched)))

    def grid_values(self, gamma_axis, beta_axis) -> np.ndarray:
        grids = self.parts.grids(gamma_axis, beta_axis)
        return sum(w * g for w, g in zip(self.weights, grids))


class _F1Parts:
    def __init__(self):
        self.objectives = [SubgraphObjective(g, 1) for g in (G4, G5, G6)]
        self._grid_cache: dict = {}

    def values(self, sched: AngleSchedule) -> np.ndarray:
        return np.array([obj(sched) for obj in self.objectives])

    def grids(self, gamma_axis, beta_axis):
        key = (tuple(np.asarray(gamma_axis).tolist()), tuple(np.asarray(beta_axis).tolist()))
        if key not in self._grid_cache:
            self._grid_cache[key] = [obj.grid_values(gamma_axis, beta_axis) for obj in self.objectives]
        return self._grid_cache[key]


def f1_nst(s: float, t: float, gamma: float, beta: float) -> float:
    """``F_1 / n`` at angles ``(gamma, beta)`` for densities ``(s, t)``."""
    return F1Density(s, t)(AngleSchedule((gamma,), (beta,)))


def m1_density(
    s: float,
    t: float,
    config: OptimizerConfig | None = None,
    warm_starts=(),
    parts: _F1Parts | None = None,
) -> OptimizationResult:
    """Maximize ``F_1 / n`` over the angles; ``best_value`` is ``M_1(1, s, t)``."""
    return maximize(F1Density(s, t, parts), 1, config, warm_starts)


def ratio_bound(s: float, t: float, config: OptimizerConfig | None = None, parts=None) -> float:
    """Lower bound ``M_1(1, s, t) / (3/2 - s - t)`` on the level-1 ratio."""
    return m1_density(s, t, config, parts=parts).best_value / (1.5 - s - t)


@dataclass
class WorstCase:
    s: float
    t: float
    ratio: float
    schedule: AngleSchedule
    samples: list[tuple[float, float, float]]

    def to_dict(self) -> dict:
        return {
            "s": self.s,
            "t": self.t,
            "ratio": self.ratio,
            "gamma": self.schedule.gammas[0],
            "beta": self.schedule.betas[0],
            "grid_points": len(self.samples),
        }

    def samples_csv(self) -> str:
        rows = ["s,t,ratio"] + [f"{s!r},{t!r},{r!r}" for s, t, r in self.samples]
        return "\n".join(rows) + "\n"


def feasible_grid(grid: int) -> list[tuple[float, float]]:
    """Points ``(i/(grid-1) * 1/4, j/(grid-1) * 1/3)`` with ``4s + 3t <= 1``."""
    if grid < 2:
        raise InfeasibleError("need at least 2 points per axis")
    pts = []
    for i in range(grid):
        for j in range(grid):
            if i + j <= grid - 1:
                pts.append((i / (grid - 1) / 4, j / (grid - 1) / 3))
    return pts


def worst_case_ratio(
    grid: int = 20, config: OptimizerConfig | None = None, tol: float = 1e-6
) -> WorstCase:
    """Minimize the level-1 ratio bound over the feasible ``(s, t)`` triangle.

    Each grid point maximizes over the angles, warm-started from the previous
    point's optimum; the best grid point is then polished by a compass search
    in ``(s, t)`` that treats infeasible points as ``+inf``.
    """
    config = config or OptimizerConfig()
    parts = _F1Parts()
    samples = []
    best = None
    warm: list[AngleSchedule] = []
    for s, t in feasible_grid(grid):
        res = m1_density(s, t, config, warm, parts)
        warm = [res.best_schedule]
        ratio = res.best_value / (1.5 - s - t)
        samples.append((s, t, ratio))
        if best is None or ratio < best[2]:
            best = (s, t, ratio, res.best_schedule)

    def neg_ratio(x):
        try:
            check_densities(x[0], x[1])
        except InfeasibleError:
            return -math.inf
        return -ratio_bound(x[0], x[1], config, parts)

    step = 1 / (grid - 1) / 8
    x, negr, _ = compass_search(neg_ratio, best[:2], step, tol, f0=-best[2])
    s_opt, t_opt = float(x[0]), float(x[1])
    final = m1_density(s_opt, t_opt, config, [best[3]], parts)
    return WorstCase(s_opt, t_opt, -negr, final.best_schedule, samples)


@dataclass
class RatioCertificate:
    n: int
    S: int
    T: int
    m1: float
    cut_upper_bound: float
    ratio_lower_bound: float
    schedule: AngleSchedule | None = None
    k4_special_case: bool = False

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "S": self.S,
            "T": self.T,
            "M1": self.m1,
            "cut_upper_bound": self.cut_upper_bound,
            "ratio_lower_bound": self.ratio_lower_bound,
            "k4_special_case": self.k4_special_case,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def certify_instance(g: Graph, config: OptimizerConfig | None = None) -> RatioCertificate:
    """Level-1 ratio lower bound ``M_1(n, S, T) / (3n/2 - S - T)`` for one graph.

    Raises :class:`SpecialCaseError` for K4 and :class:`InfeasibleError` for
    graphs that are not connected and 3-regular.
    """
    if is_k4(g):
        raise SpecialCaseError("K4 is the excluded special case; its ratio is higher")
    if not g.is_regular(3) or g.n_vertices == 0:
        raise InfeasibleError("certificates are defined for 3-regular graphs")
    if not g.is_connected():
        raise InfeasibleError("certificates are defined for connected graphs")
    S = count_crossed_squares(g)
    T = count_isolated_triangles(g)
    result = maximize_fp(g, 1, config)
    upper = 1.5 * g.n_vertices - S - T
    return RatioCertificate(
        g.n_vertices, S, T, result.best_value, upper, result.best_value / upper, result.best_schedule
    )
