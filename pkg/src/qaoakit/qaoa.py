"""Expected cut size F_p, computed on the whole graph or per subgraph type.

Two independent routes are provided:

* :func:`fp_full` simulates every qubit of the instance;
* :func:`fp_decomposed` sums ``w_g * f_g`` over the subgraph types of a
  :class:`~qaoakit.graph.SubgraphDecomposition`, simulating only the light
  cone of one representative edge per type.

The objective classes at the bottom wrap both routes as callables on
:class:`~qaoakit.statevector.AngleSchedule` and add ``grid_values``, which
evaluates a whole product grid while sharing circuit prefixes between grid
points.  The optimizer uses it when present.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import statevector as sv
from .errors import InfeasibleError
from .graph import Graph, RootedSubgraph, SubgraphDecomposition, canonical_key, decompose, q_tree
from .statevector import DEFAULT_MAX_QUBITS, AngleSchedule


@dataclass
class FpEvaluation:
    value: float
    method: str
    p: int
    per_subgraph: dict[str, float] | None = None

    def to_dict(self) -> dict:
        return {
            "method": self.method,
            "p": self.p,
            "value": self.value,
            "per_subgraph": dict(self.per_subgraph or {}),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


@dataclass(frozen=True)
class ConcentrationBound:
    variance_bound: float
    v: int
    p: int
    m: int


def fp_full(
    g: Graph, sched: AngleSchedule, max_qubits: int = DEFAULT_MAX_QUBITS
) -> FpEvaluation:
    """<C> in the level-p state of the whole instance."""
    c = sv.cost_diagonal(g, max_qubits)
    state = sv.prepare_qaoa_state(c, sched, max_qubits)
    return FpEvaluation(sv.expectation(state, c), "full", sched.p)


def f_subgraph(
    s: RootedSubgraph, sched: AngleSchedule, max_qubits: int = DEFAULT_MAX_QUBITS
) -> float:
    """Contribution of the root edge, simulated on the subgraph's own qubits.

    The circuit uses only the subgraph's edges and vertices.  The last mixer
    layer is applied to the two root qubits alone, which cannot change the
    root-edge expectation.
    """
    g = s.graph
    c = sv.cost_diagonal(g, max_qubits)
    j, k = s.root_edge
    state = sv.prepare_qaoa_state(c, sched, max_qubits, final_mixer_qubits=(j, k))
    return sv.edge_expectation(state, j, k)


def fp_decomposed(
    d: SubgraphDecomposition,
    sched: AngleSchedule,
    max_qubits: int = DEFAULT_MAX_QUBITS,
    cache: dict | None = None,
) -> FpEvaluation:
    """``sum_g w_g f_g`` over the subgraph types of ``d``.

    ``cache`` (optional) memoizes ``f_g`` on ``(key, gammas, betas)``, compared
    bit-exactly; pass the same dict across a sweep to reuse values.
    """
    if sched.p != d.p:
        raise InfeasibleError(f"schedule has p={sched.p}, decomposition has p={d.p}")
    per = {}
    total = 0.0
    for key, entry in d.entries.items():
        memo = (key, sched.gammas, sched.betas)
        if cache is not None and memo in cache:
            f = cache[memo]
        else:
            f = f_subgraph(entry.subgraph, sched, max_qubits)
            if cache is not None:
                cache[memo] = f
        per[key.hex()] = f
        total += entry.weight * f
    return FpEvaluation(total, "decomposed", sched.p, per)


def use_decomposition(g: Graph, p: int) -> bool:
    """Whether subgraph types are smaller than the instance itself."""
    return q_tree(max(g.max_degree, 2), p) < g.n_vertices


def fp(g: Graph, sched: AngleSchedule, max_qubits: int = DEFAULT_MAX_QUBITS) -> FpEvaluation:
    """F_p by the cheaper route: decomposed when ``q_tree(v, p) < n``."""
    if use_decomposition(g, sched.p):
        return fp_decomposed(decompose(g, sched.p), sched, max_qubits)
    return fp_full(g, sched, max_qubits)


def concentration_bound(v: int, p: int, m: int) -> ConcentrationBound:
    """Upper bound on the variance of C in any level-p state.

    Each edge is correlated with at most ``2((v-1)^(2p+2) - 1)/(v-2)`` edges
    (``4p + 4`` when ``v = 2``), and each correlation is at most 1.
    """
    if v < 2:
        raise InfeasibleError("degree must be at least 2")
    if v == 2:
        per_edge = 4 * p + 4
    else:
        per_edge = 2 * ((v - 1) ** (2 * p + 2) - 1) // (v - 2)
    return ConcentrationBound(float(per_edge * m), v, p, m)


def repetition_estimate(fp_value: float | None, m: int, c: float = 1.0) -> int:
    """Shots needed to see a cut of at least ``F_p - 1``: ``ceil(c m ln m)``."""
    if m < 2:
        raise InfeasibleError("need at least two edges")
    return math.ceil(c * m * math.log(m))


# -- objectives ---------------------------------------------------------------


def _two_qubit_rdm(state: np.ndarray, j: int, k: int) -> np.ndarray:
    """Reduced density matrix of qubits ``j, k``, basis index ``2*z_k + z_j``."""
    n = sv.n_qubits_of(state)
    t = state.reshape((2,) * n)
    # Axis a of the reshaped tensor is qubit n-1-a.
    t = np.moveaxis(t, (n - 1 - k, n - 1 - j), (0, 1)).reshape(4, -1)
    return t @ t.conj().T


_CUT_DIAG = np.array([0.0, 1.0, 1.0, 0.0])


def _edge_values_after_mixer(rdm: np.ndarray, betas: np.ndarray) -> np.ndarray:
    """<C_jk> after a final mixer layer, for every beta, from the pair's RDM."""
    cos, msin = np.cos(betas), -1j * np.sin(betas)
    r = np.empty((betas.size, 2, 2), dtype=complex)
    r[:, 0, 0] = r[:, 1, 1] = cos
    r[:, 0, 1] = r[:, 1, 0] = msin
    rr = np.einsum("bac,bdf->badcf", r, r).reshape(betas.size, 4, 4)
    evolved_diag = np.einsum("bij,jk,bik->bi", rr, rdm, rr.conj()).real
    return evolved_diag @ _CUT_DIAG


class _LayeredObjective:
    """Shared grid machinery; subclasses supply the diagonal and the last step."""

    diagonal: np.ndarray
    p: int

    def _final(self, state: np.ndarray, betas: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def grid_values(self, gamma_axis: Sequence[float], beta_axis: Sequence[float]) -> np.ndarray:
        """Objective on the product grid, shape ``(G,)*p + (B,)*p``.

        Axes are ordered ``gamma_1..gamma_p, beta_1..beta_p``.  States after
        each layer are reused by every grid point sharing that prefix.
        """
        gammas = np.asarray(gamma_axis, dtype=float)
        betas = np.asarray(beta_axis, dtype=float)
        p = self.p
        out = np.empty((gammas.size, betas.size) * p)
        start = sv.uniform_state(sv.n_qubits_of(self.diagonal), self.max_qubits)

        def descend(state, layer, target):
            for gi, gamma in enumerate(gammas):
                phased = sv.apply_phase_separator(state.copy(), self.diagonal, gamma)
                if layer == p - 1:
                    target[gi] = self._final(phased, betas)
                    continue
                for bi, beta in enumerate(betas):
                    mixed = sv.apply_mixer(phased.copy(), beta)
                    descend(mixed, layer + 1, target[gi, bi])

        descend(start, 0, out)
        order = [2 * i for i in range(p)] + [2 * i + 1 for i in range(p)]
        return out.transpose(order)


class FullObjective(_LayeredObjective):
    """F_p on the whole graph as a function of the schedule."""

    def __init__(self, g: Graph, p: int, max_qubits: int = DEFAULT_MAX_QUBITS):
        self.graph = g
        self.p = p
        self.max_qubits = max_qubits
        self.diagonal = sv.cost_diagonal(g, max_qubits)

    def __call__(self, sched: AngleSchedule) -> float:
        state = sv.prepare_qaoa_state(self.diagonal, sched, self.max_qubits)
        return sv.expectation(state, self.diagonal)

    def _final(self, state, betas):
        return np.array([
            sv.expectation(sv.apply_mixer(state.copy(), b), self.diagonal) for b in betas
        ])


class SubgraphObjective(_LayeredObjective):
    """f_g of one rooted subgraph as a function of the schedule."""

    def __init__(self, s: RootedSubgraph, p: int, max_qubits: int = DEFAULT_MAX_QUBITS):
        self.subgraph = s
        self.p = p
        self.max_qubits = max_qubits
        self.diagonal = sv.cost_diagonal(s.graph, max_qubits)

    def __call__(self, sched: AngleSchedule) -> float:
        j, k = self.subgraph.root_edge
        state = sv.prepare_qaoa_state(self.diagonal, sched, self.max_qubits, (j, k))
        return sv.edge_expectation(state, j, k)

    def _final(self, state, betas):
        j, k = self.subgraph.root_edge
        return _edge_values_after_mixer(_two_qubit_rdm(state, j, k), betas)


@dataclass
class DecomposedObjective:
    """``sum_g w_g f_g`` with per-type memoization across calls."""

    decomposition: SubgraphDecomposition
    max_qubits: int = DEFAULT_MAX_QUBITS
    cache: dict = field(default_factory=dict)

    def __post_init__(self):
        self.p = self.decomposition.p
        self._parts = [
            (entry.weight, SubgraphObjective(entry.subgraph, self.p, self.max_qubits))
            for entry in self.decomposition.entries.values()
        ]

    def __call__(self, sched: AngleSchedule) -> float:
        return fp_decomposed(self.decomposition, sched, self.max_qubits, self.cache).value

    def grid_values(self, gamma_axis, beta_axis) -> np.ndarray:
        return sum(w * part.grid_values(gamma_axis, beta_axis) for w, part in self._parts)


def make_objective(target, p: int, max_qubits: int = DEFAULT_MAX_QUBITS):
    """Objective for a graph, a decomposition or a single rooted subgraph."""
    if isinstance(target, SubgraphDecomposition):
        if target.p != p:
            raise InfeasibleError(f"decomposition built for p={target.p}, asked for p={p}")
        return DecomposedObjective(target, max_qubits)
    if isinstance(target, RootedSubgraph):
        return SubgraphObjective(target, p, max_qubits)
    if isinstance(target, Graph):
        if use_decomposition(target, p):
            return DecomposedObjective(decompose(target, p), max_qubits)
        return FullObjective(target, p, max_qubits)
    raise TypeError(f"cannot build an objective from {type(target).__name__}")


def subgraph_key_hex(s: RootedSubgraph) -> str:
    return canonical_key(s).hex()
