"""Dense state-vector engine for the alternating MaxCut circuit.

States are 1-D complex numpy arrays of length ``2**n``.  Qubit ``j`` is bit
``j`` of the basis index (little-endian), and bit strings are written with
qubit 0 first, so index 1 on two qubits is the string ``"10"``.

The apply functions work in place on the array they are given and return
it, which keeps optimization loops free of extra allocations.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numba
import numpy as np

from .errors import InfeasibleError, ResourceLimitError
from .graph import Graph

DEFAULT_MAX_QUBITS = 24


@dataclass(frozen=True)
class AngleSchedule:
    """The ``2p`` angles of a level-``p`` circuit.

    The nominal search box is ``gammas`` in ``[0, 2pi)`` and ``betas`` in
    ``[0, pi)``; values outside it are accepted since both unitaries are
    periodic.
    """

    gammas: tuple[float, ...]
    betas: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "gammas", tuple(float(x) for x in self.gammas))
        object.__setattr__(self, "betas", tuple(float(x) for x in self.betas))
        if len(self.gammas) != len(self.betas) or not self.gammas:
            raise InfeasibleError("need p >= 1 gammas and the same number of betas")

    @property
    def p(self) -> int:
        return len(self.gammas)

    def as_vector(self) -> np.ndarray:
        return np.array(self.gammas + self.betas)

    @classmethod
    def from_vector(cls, x: Sequence[float]) -> "AngleSchedule":
        x = [float(v) for v in x]
        p = len(x) // 2
        return cls(tuple(x[:p]), tuple(x[p:]))

    @classmethod
    def zeros(cls, p: int) -> "AngleSchedule":
        return cls((0.0,) * p, (0.0,) * p)

    def extended(self) -> "AngleSchedule":
        """Same circuit at level ``p + 1`` with an identity final layer."""
        return AngleSchedule(self.gammas + (0.0,), self.betas + (0.0,))


def n_qubits_of(state: np.ndarray) -> int:
    n = state.size.bit_length() - 1
    if state.ndim != 1 or 1 << n != state.size:
        raise InfeasibleError("state length must be a power of two")
    return n


def check_qubits(n: int, max_qubits: int = DEFAULT_MAX_QUBITS) -> None:
    if n < 1:
        raise InfeasibleError("need at least one qubit")
    if n > max_qubits:
        raise ResourceLimitError(f"{n} qubits exceeds the limit of {max_qubits}")


def uniform_state(n: int, max_qubits: int = DEFAULT_MAX_QUBITS) -> np.ndarray:
    check_qubits(n, max_qubits)
    return np.full(1 << n, 2.0 ** (-n / 2), dtype=complex)


def basis_state(n: int, bits: str | int, max_qubits: int = DEFAULT_MAX_QUBITS) -> np.ndarray:
    check_qubits(n, max_qubits)
    index = bitstring_to_index(bits) if isinstance(bits, str) else int(bits)
    state = np.zeros(1 << n, dtype=complex)
    state[index] = 1.0
    return state


def index_to_bitstring(index: int, n: int) -> str:
    return "".join("1" if (index >> j) & 1 else "0" for j in range(n))


def bitstring_to_index(bits: str) -> int:
    return sum(1 << j for j, b in enumerate(bits) if b == "1")


def bit_table(n: int) -> np.ndarray:
    """``(n, 2**n)`` array whose row ``j`` holds bit ``j`` of every index."""
    idx = np.arange(1 << n)
    return np.array([(idx >> j) & 1 for j in range(n)], dtype=np.int8)


def cut_values(n: int, edges: Sequence[tuple[int, int]]) -> np.ndarray:
    """Number of cut edges for every basis string (int array of length 2**n)."""
    idx = np.arange(1 << n, dtype=np.int64)
    values = np.zeros(1 << n, dtype=np.int64)
    for j, k in edges:
        values += ((idx >> j) ^ (idx >> k)) & 1
    return values


def cost_diagonal(g: Graph, max_qubits: int = DEFAULT_MAX_QUBITS) -> np.ndarray:
    """MaxCut objective C(z) on every basis string of ``g``'s qubits."""
    check_qubits(g.n_vertices, max_qubits)
    return cut_values(g.n_vertices, g.edges)


def _check_dims(state: np.ndarray, c: np.ndarray) -> None:
    if state.shape != c.shape:
        raise InfeasibleError(f"state length {state.size} != diagonal length {c.size}")


def apply_phase_separator(state: np.ndarray, c: np.ndarray, gamma: float) -> np.ndarray:
    """Multiply amplitude ``z`` by ``exp(-i gamma C(z))`` in place."""
    _check_dims(state, c)
    if np.issubdtype(c.dtype, np.integer) and c.size > 64:
        # Integer spectrum: one exp per distinct level, then a gather.
        levels = np.exp(-1j * gamma * np.arange(int(c.max()) + 1))
        state *= levels[c]
    else:
        state *= np.exp(-1j * gamma * c)
    return state


@numba.njit(cache=True)
def _rotate_all(state, cos, msin):
    size = state.size
    step = 1
    while step < size:
        for base in range(0, size, 2 * step):
            for i in range(base, base + step):
                a = state[i]
                b = state[i + step]
                state[i] = cos * a + msin * b
                state[i + step] = cos * b + msin * a
        step *= 2


def _rotate_qubit(state: np.ndarray, j: int, cos: float, msin: complex) -> None:
    view = state.reshape(-1, 2, 1 << j)
    lo, hi = view[:, 0, :], view[:, 1, :]
    tmp = lo.copy()
    lo *= cos
    lo += msin * hi
    hi *= cos
    hi += msin * tmp


def apply_mixer(
    state: np.ndarray, beta: float, qubits: Sequence[int] | None = None
) -> np.ndarray:
    """Apply ``exp(-i beta X)`` to each listed qubit (default: all) in place.

    Per qubit this is the butterfly ``(a, b) -> (a cos - i b sin, b cos - i a sin)``
    over index pairs differing in that bit.
    """
    n_qubits_of(state)
    cos, msin = np.cos(beta), -1j * np.sin(beta)
    if qubits is None:
        _rotate_all(state, cos, msin)
    else:
        for j in qubits:
            _rotate_qubit(state, j, cos, msin)
    return state


def prepare_qaoa_state(
    g: Graph | np.ndarray,
    sched: AngleSchedule,
    max_qubits: int = DEFAULT_MAX_QUBITS,
    final_mixer_qubits: Sequence[int] | None = None,
) -> np.ndarray:
    """Alternate phase separator and mixer layers starting from ``|s>``.

    ``g`` may be a graph or a precomputed cost diagonal.  Passing
    ``final_mixer_qubits`` restricts the last mixer layer to those qubits;
    this leaves every observable supported on them unchanged.
    """
    c = cost_diagonal(g, max_qubits) if isinstance(g, Graph) else g
    n = n_qubits_of(c)
    state = uniform_state(n, max_qubits)
    for layer, (gamma, beta) in enumerate(zip(sched.gammas, sched.betas)):
        apply_phase_separator(state, c, gamma)
        last = layer == sched.p - 1
        apply_mixer(state, beta, final_mixer_qubits if last else None)
    return state


def probabilities(state: np.ndarray) -> np.ndarray:
    return state.real**2 + state.imag**2


def expectation(state: np.ndarray, c: np.ndarray) -> float:
    _check_dims(state, c)
    return float(probabilities(state) @ c)


def variance(state: np.ndarray, c: np.ndarray) -> float:
    _check_dims(state, c)
    probs = probabilities(state)
    mean = probs @ c
    # Centered form avoids cancellation in <C^2> - <C>^2.
    return float(max(probs @ (c - mean) ** 2, 0.0))


def edge_expectation(state: np.ndarray, j: int, k: int) -> float:
    """Probability that bits ``j`` and ``k`` differ, i.e. <C_jk>."""
    n_qubits_of(state)
    idx = np.arange(state.size)
    differ = ((idx >> j) ^ (idx >> k)) & 1
    return float(probabilities(state) @ differ)


def sample_indices(state: np.ndarray, rng: np.random.Generator, shots: int) -> np.ndarray:
    if shots < 1:
        raise InfeasibleError("shots must be at least 1")
    probs = probabilities(state)
    cdf = np.cumsum(probs)
    cdf /= cdf[-1]
    draws = np.searchsorted(cdf, rng.random(shots), side="right")
    return np.minimum(draws, state.size - 1)


def sample(state: np.ndarray, rng: np.random.Generator, shots: int) -> list[str]:
    """Draw ``shots`` computational-basis bit strings from ``|amp|**2``."""
    n = n_qubits_of(state)
    return [index_to_bitstring(int(i), n) for i in sample_indices(state, rng, shots)]
