import math

import numpy as np
import pytest

from conftest import petersen_graph
from qaoakit.errors import BudgetExceededError, InfeasibleError
from qaoakit.graph import decompose, prism_graph, ring_graph
from qaoakit.optimizer import (
    OptimizerConfig,
    compass_search,
    grid_axes,
    grid_search,
    maximize,
    maximize_fp,
    maximize_fp_levels,
    refine,
    wrap_schedule,
)
from qaoakit.qaoa import fp_full
from qaoakit.statevector import AngleSchedule

FAST = OptimizerConfig(resolution={1: 24, 2: 8, 3: 4}, tol=1e-7)


def bump(sched: AngleSchedule) -> float:
    g, b = sched.gammas[0], sched.betas[0]
    return -((g - 1.0) ** 2) - (b - 0.5) ** 2


class TestCompass:
    def test_quadratic(self):
        x, fx, evals = compass_search(lambda v: -np.sum((v - [0.3, -1.2]) ** 2), [0, 0], 0.5, 1e-9)
        assert np.allclose(x, [0.3, -1.2], atol=1e-8)
        assert evals > 0

    def test_never_worse(self):
        x, fx, _ = compass_search(lambda v: -abs(v[0]), [0.0], 1.0, 1e-6)
        assert fx == 0.0 and x[0] == 0.0

    def test_budget(self):
        with pytest.raises(BudgetExceededError):
            compass_search(lambda v: float(v[0]), [0.0], 1.0, 1e-9, max_evaluations=50)


class TestGrid:
    def test_axes(self):
        g, b = grid_axes(4)
        assert np.allclose(g, [0, np.pi / 2, np.pi, 3 * np.pi / 2])
        assert np.allclose(b, [0, np.pi / 4, np.pi / 2, 3 * np.pi / 4])
        assert grid_axes(4, symmetric=True)[1][-1] == pytest.approx(3 * np.pi / 8)

    def test_pointwise_objective(self):
        res = grid_search(bump, 1, 8)
        assert res.evaluations == 64
        assert res.best_schedule == AngleSchedule((np.pi / 4,), (np.pi / 8 * 1,))

    def test_tie_break_lexicographic(self):
        res = grid_search(lambda s: 1.0, 1, 4)
        assert res.best_schedule == AngleSchedule((0.0,), (0.0,))

    def test_budget(self):
        with pytest.raises(BudgetExceededError):
            grid_search(bump, 2, 10, budget=1000)
        with pytest.raises(InfeasibleError):
            grid_search(bump, 1, 1)


class TestMaximize:
    def test_refined_optimum(self):
        res = maximize(bump, 1, OptimizerConfig(resolution={1: 8}))
        assert res.best_value == pytest.approx(0, abs=1e-12)
        assert res.best_schedule.gammas[0] == pytest.approx(1.0, abs=1e-6)

    def test_ring_p1(self):
        # Per-edge maximum on large rings at p=1 is 3/4.
        res = maximize_fp(ring_graph(10), 1, FAST)
        assert res.best_value / 10 == pytest.approx(0.75, abs=1e-9)

    def test_wrap(self):
        s = wrap_schedule(AngleSchedule((7.0,), (-0.5,)))
        assert 0 <= s.gammas[0] < 2 * np.pi and 0 <= s.betas[0] < np.pi
        g = prism_graph(3)
        assert fp_full(g, s).value == pytest.approx(fp_full(g, AngleSchedule((7.0,), (-0.5,))).value)

    def test_refine_keeps_start_value(self):
        start = AngleSchedule((1.0,), (0.5,))
        res = refine(bump, start, 1e-6)
        assert res.best_value == 0.0

    def test_levels_monotone_and_above_half(self):
        g = petersen_graph()
        results = maximize_fp_levels(g, 2, FAST)
        assert results[0].best_value >= g.m / 2
        assert results[1].best_value >= results[0].best_value - 1e-12

    def test_multistart_is_seeded(self):
        cfg = OptimizerConfig(resolution={}, multistart_samples=20, multistart_refine=2, tol=1e-5)
        a = maximize_fp(ring_graph(12), 1, cfg)
        b = maximize_fp(ring_graph(12), 1, cfg)
        assert a.best_schedule == b.best_schedule and a.best_value == b.best_value
        assert a.best_value / 12 == pytest.approx(0.75, abs=1e-6)

    def test_previous_level_checked(self):
        r1 = maximize_fp(ring_graph(10), 1, FAST)
        with pytest.raises(InfeasibleError):
            maximize_fp(ring_graph(10), 3, FAST, previous=r1)

    def test_levels_reject_decomposition(self):
        with pytest.raises(InfeasibleError):
            maximize_fp_levels(decompose(ring_graph(10), 1), 2)

    def test_result_dict(self):
        d = maximize_fp(prism_graph(3), 1, FAST).to_dict()
        assert set(d) == {"p", "gammas", "betas", "value", "evaluations", "grid_resolution"}
        assert d["grid_resolution"] == 24 and math.isfinite(d["value"])
