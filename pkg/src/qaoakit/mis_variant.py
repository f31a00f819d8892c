"""Independent-set variant on the space spanned by legal strings.

The basis holds every independent set of the input graph, as bit masks with
bit ``j`` set when vertex ``j`` is in the set.  The objective is the Hamming
weight, the mixer ``B`` is the hypercube adjacency restricted to legal
strings, and the state is

    U(B, b_p) U(C, gamma_{p-1}) ... U(C, gamma_1) U(B, b_1) |0...0>

with ``U(B, b) = exp(-i b B)`` evaluated by a scaled Taylor series.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
import scipy.sparse as sp

from .errors import BudgetExceededError, InfeasibleError, ResourceLimitError
from .graph import Graph
from .optimizer import compass_search

DEFAULT_MAX_BASIS = 1 << 22


@dataclass(frozen=True)
class VariantSchedule:
    """``p`` mixer times ``bs`` and ``p - 1`` phase angles ``gammas``."""

    bs: tuple[float, ...]
    gammas: tuple[float, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "bs", tuple(float(x) for x in self.bs))
        object.__setattr__(self, "gammas", tuple(float(x) for x in self.gammas))
        if not self.bs or len(self.bs) != len(self.gammas) + 1:
            raise InfeasibleError("need p >= 1 mixer times and p - 1 phase angles")

    @property
    def p(self) -> int:
        return len(self.bs)

    def as_vector(self) -> np.ndarray:
        return np.array(self.bs + self.gammas)

    @classmethod
    def from_vector(cls, x: Sequence[float]) -> "VariantSchedule":
        p = (len(x) + 1) // 2
        return cls(tuple(x[:p]), tuple(x[p:]))

    def extended(self) -> "VariantSchedule":
        """Level ``p + 1`` schedule with ``b_{p+1} = gamma_p = 0``."""
        return VariantSchedule(self.bs + (0.0,), self.gammas + (0.0,))


@dataclass
class IndependentSetBasis:
    """Legal strings of a graph in lexicographic order of their bit strings.

    The bit string of a mask lists vertex 0 first, matching
    :func:`qaoakit.statevector.index_to_bitstring`.
    """

    graph: Graph
    masks: np.ndarray
    index: dict[int, int] = field(repr=False)

    @property
    def size(self) -> int:
        return int(self.masks.size)

    @property
    def n(self) -> int:
        return self.graph.n_vertices

    @property
    def zero_index(self) -> int:
        return self.index[0]

    def weights(self) -> np.ndarray:
        w = np.zeros(self.size, dtype=np.int64)
        for j in range(self.n):
            w += (self.masks >> j) & 1
        return w

    def strings(self) -> list[str]:
        return [mask_to_string(int(m), self.n) for m in self.masks]

    def to_dict(self) -> dict:
        return {"n": self.n, "size": self.size, "strings": self.strings()}

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def mask_to_string(mask: int, n: int) -> str:
    return "".join("1" if (mask >> j) & 1 else "0" for j in range(n))


def is_independent(g: Graph, mask: int) -> bool:
    return not any((mask >> j) & 1 and (mask >> k) & 1 for j, k in g.edges)


def enumerate_basis(g: Graph, max_size: int = DEFAULT_MAX_BASIS) -> IndependentSetBasis:
    """All independent sets by backtracking over vertices ``0, 1, ...``.

    Vertex ``j`` is first left out, then put in when none of its earlier
    neighbors is in, which yields lexicographic string order directly.
    """
    n = g.n_vertices
    earlier = [sum(1 << u for u in g.adjacency[v] if u < v) for v in range(n)]
    out: list[int] = []

    def extend(v: int, mask: int) -> None:
        if v == n:
            out.append(mask)
            if len(out) > max_size:
                raise ResourceLimitError(f"more than {max_size} independent sets")
            return
        extend(v + 1, mask)
        if not mask & earlier[v]:
            extend(v + 1, mask | (1 << v))

    extend(0, 0)
    masks = np.array(out, dtype=np.int64)
    return IndependentSetBasis(g, masks, {int(m): i for i, m in enumerate(out)})


def build_mixer_matrix(basis: IndependentSetBasis) -> sp.csr_matrix:
    """Sparse ``B`` with ``B[z, z'] = 1`` iff legal ``z, z'`` differ in one bit."""
    masks = basis.masks
    order = np.argsort(masks)
    sorted_masks = masks[order]
    rows, cols = [], []
    for j in range(basis.n):
        flipped = masks ^ (1 << j)
        pos = np.searchsorted(sorted_masks, flipped)
        pos = np.minimum(pos, masks.size - 1)
        hit = sorted_masks[pos] == flipped
        rows.append(np.flatnonzero(hit))
        cols.append(order[pos[hit]])
    r = np.concatenate(rows) if rows else np.array([], dtype=np.int64)
    c = np.concatenate(cols) if cols else np.array([], dtype=np.int64)
    data = np.ones(r.size)
    return sp.csr_matrix((data, (r, c)), shape=(basis.size, basis.size))


def zero_state(basis: IndependentSetBasis) -> np.ndarray:
    state = np.zeros(basis.size, dtype=complex)
    state[basis.zero_index] = 1.0
    return state


def apply_exp_b(
    state: np.ndarray,
    B: sp.spmatrix,
    b: float,
    tol: float = 1e-12,
    max_terms: int = 200,
) -> np.ndarray:
    """Return ``exp(-i b B) state`` via a Taylor series with time splitting.

    ``b`` is cut into ``k`` sub-steps with ``|b| ||B||_1 / k <= 1``; each
    sub-step sums terms until a term's norm falls below ``tol``.
    """
    if state.shape != (B.shape[0],):
        raise InfeasibleError("state length does not match the mixer")
    if b == 0:
        return state.copy()
    norm_bound = float(abs(B).sum(axis=0).max()) if B.nnz else 0.0
    steps = max(1, math.ceil(abs(b) * norm_bound))
    tau = b / steps
    out = state.astype(complex, copy=True)
    for _ in range(steps):
        term = out.copy()
        acc = out.copy()
        for order in range(1, max_terms + 1):
            term = (-1j * tau / order) * (B @ term)
            acc += term
            if np.linalg.norm(term) < tol:
                break
        else:
            raise BudgetExceededError(f"series did not converge in {max_terms} terms")
        out = acc
    return out


def apply_exp_c(state: np.ndarray, weights: np.ndarray, gamma: float) -> np.ndarray:
    """Multiply amplitude ``z`` by ``exp(-i gamma |z|)``."""
    return state * np.exp(-1j * gamma * weights)


class VariantModel:
    """Basis, mixer and weights of one graph, reused across schedules."""

    def __init__(self, g_or_basis: Graph | IndependentSetBasis, max_size: int = DEFAULT_MAX_BASIS):
        basis = g_or_basis if isinstance(g_or_basis, IndependentSetBasis) else enumerate_basis(g_or_basis, max_size)
        self.basis = basis
        self.B = build_mixer_matrix(basis)
        self.weights = basis.weights()

    def state(self, sched: VariantSchedule, tol: float = 1e-12) -> np.ndarray:
        return prepare_variant_state(self.basis, sched, tol, self.B, self.weights)

    def fp(self, sched: VariantSchedule) -> float:
        state = self.state(sched)
        return float((state.real**2 + state.imag**2) @ self.weights)


def prepare_variant_state(
    basis: IndependentSetBasis,
    sched: VariantSchedule,
    tol: float = 1e-12,
    B: sp.spmatrix | None = None,
    weights: np.ndarray | None = None,
) -> np.ndarray:
    """Alternate mixer and phase layers from the empty set, mixer first and last."""
    B = build_mixer_matrix(basis) if B is None else B
    weights = basis.weights() if weights is None else weights
    state = zero_state(basis)
    state = apply_exp_b(state, B, sched.bs[0], tol)
    for gamma, b in zip(sched.gammas, sched.bs[1:]):
        state = apply_exp_c(state, weights, gamma)
        state = apply_exp_b(state, B, b, tol)
    return state


def fp_variant(basis: IndependentSetBasis | VariantModel, sched: VariantSchedule) -> float:
    """Expected independent-set size in the variant state."""
    model = basis if isinstance(basis, VariantModel) else VariantModel(basis)
    return model.fp(sched)


def sample_variant(
    basis: IndependentSetBasis, state: np.ndarray, rng: np.random.Generator, shots: int
) -> list[str]:
    """Draw legal strings with probability ``|amp|**2``."""
    if shots < 1:
        raise InfeasibleError("shots must be at least 1")
    probs = state.real**2 + state.imag**2
    cdf = np.cumsum(probs)
    cdf /= cdf[-1]
    idx = np.minimum(np.searchsorted(cdf, rng.random(shots), side="right"), basis.size - 1)
    return [mask_to_string(int(basis.masks[i]), basis.n) for i in idx]


@dataclass
class VariantConfig:
    """Search settings.  ``b_window`` is the search interval for each ``b``."""

    resolution: dict[int, int] = field(default_factory=lambda: {1: 64, 2: 16, 3: 8})
    b_window: float = 2 * math.pi
    tol: float = 1e-8
    max_grid_evaluations: int = 200_000
    max_refine_evaluations: int = 200_000

    def to_dict(self) -> dict:
        return {
            "resolution": {str(k): v for k, v in sorted(self.resolution.items())},
            "b_window": self.b_window,
            "tol": self.tol,
        }


@dataclass
class VariantResult:
    best_schedule: VariantSchedule
    best_value: float
    evaluations: int
    grid_resolution: int
    b_window: float = 2 * math.pi

    def to_dict(self) -> dict:
        return {
            "p": self.best_schedule.p,
            "bs": list(self.best_schedule.bs),
            "gammas": list(self.best_schedule.gammas),
            "value": self.best_value,
            "evaluations": self.evaluations,
            "grid_resolution": self.grid_resolution,
            "b_window": [0.0, self.b_window],
        }


def maximize_variant(
    model: VariantModel | IndependentSetBasis | Graph,
    p: int,
    config: VariantConfig | None = None,
    previous: VariantResult | None = None,
) -> VariantResult:
    """Grid over ``b in [0, b_window)``, ``gamma in [0, 2pi)``, then compass search.

    With ``previous`` (the level ``p - 1`` optimum) its embedding is refined
    too, so the reported value never drops below the previous level's.
    """
    config = config or VariantConfig()
    if not isinstance(model, VariantModel):
        model = VariantModel(model)
    res = config.resolution.get(p, 4)
    n_points = res ** (2 * p - 1)
    if n_points > config.max_grid_evaluations:
        raise BudgetExceededError(f"{n_points} grid points exceeds budget")
    b_axis = np.arange(res) * (config.b_window / res)
    g_axis = np.arange(res) * (2 * math.pi / res)
    evals = 0
    best_val, best_x = -math.inf, None
    for idx in np.ndindex(*([res] * (2 * p - 1))):
        x = np.concatenate([b_axis[list(idx[:p])], g_axis[list(idx[p:])]])
        val = model.fp(VariantSchedule.from_vector(x))
        evals += 1
        if val > best_val:
            best_val, best_x = val, x

    def f(x):
        return model.fp(VariantSchedule.from_vector(x))

    starts = [(best_x, best_val, config.b_window / res / 2)]
    if previous is not None:
        if previous.best_schedule.p != p - 1:
            raise InfeasibleError("previous result must come from level p - 1")
        emb = previous.best_schedule.extended().as_vector()
        starts.append((emb, None, math.pi / 32))
    best = None
    for x0, f0, step in starts:
        x, fx, used = compass_search(f, x0, step, config.tol, config.max_refine_evaluations, f0)
        evals += used
        if best is None or fx > best[1]:
            best = (x, fx)
    return VariantResult(
        VariantSchedule.from_vector(best[0]), float(best[1]), evals, res, config.b_window
    )


def max_independent_set_size(g: Graph) -> int:
    """alpha(g) by exhaustive search over subsets (n <= 24)."""
    if g.n_vertices > 24:
        raise InfeasibleError("brute-force independent set is limited to 24 vertices")
    return int(enumerate_basis(g).weights().max())
