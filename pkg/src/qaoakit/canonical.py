"""Canonical labeling of small vertex-colored graphs.

Individualization-refinement search: colors are refined to an equitable
partition, the first smallest non-singleton cell is branched on, and the
lexicographically smallest relabeled edge list over all leaves is kept.  No
automorphism pruning is done, so the cost grows with the automorphism group;
this is fine for the edge neighborhoods this package produces (at most
``q_tree(v, p)`` vertices for small ``v`` and ``p``).
"""

from __future__ import annotations

import struct
from typing import Sequence


def _rank(signatures: Sequence) -> list[int]:
    order = {sig: i for i, sig in enumerate(sorted(set(signatures)))}
    return [order[sig] for sig in signatures]


def refine(adjacency: Sequence[Sequence[int]], colors: Sequence[int]) -> list[int]:
    """Color refinement to the coarsest equitable partition finer than ``colors``.

    The returned colors are dense ranks ``0..k-1`` and depend only on the
    isomorphism class of the colored graph (relabeling the vertices permutes
    the result accordingly).
    """
    colors = _rank(list(colors))
    n_classes = len(set(colors))
    while True:
        sigs = [
            (colors[v], tuple(sorted(colors[u] for u in adjacency[v])))
            for v in range(len(colors))
        ]
        new = _rank(sigs)
        new_classes = len(set(new))
        colors = new
        if new_classes == n_classes:
            return colors
        n_classes = new_classes


def _individualize(colors: list[int], v: int) -> list[int]:
    return _rank([(c, 0 if u == v else 1) for u, c in enumerate(colors)])


def _target_cell(colors: list[int]) -> list[int]:
    cells: dict[int, list[int]] = {}
    for v, c in enumerate(colors):
        cells.setdefault(c, []).append(v)
    nontrivial = [(len(cell), c) for c, cell in cells.items() if len(cell) > 1]
    _, c = min(nontrivial)
    return cells[c]


def canonical_labeling(
    n: int,
    edges: Sequence[tuple[int, int]],
    colors: Sequence[int] | None = None,
) -> tuple[list[int], tuple[tuple[int, int], ...]]:
    """Return ``(labels, certificate)`` for a colored graph.

    ``labels[v]`` is the canonical position of vertex ``v``; ``certificate``
    is the sorted edge list under that relabeling.  Two colored graphs have
    equal certificates iff they are isomorphic by a color-preserving map.
    """
    adjacency: list[list[int]] = [[] for _ in range(n)]
    for a, b in edges:
        adjacency[a].append(b)
        adjacency[b].append(a)
    start = list(colors) if colors is not None else [0] * n

    best: list = [None, None]

    def search(cols: list[int]) -> None:
        cols = refine(adjacency, cols)
        if len(set(cols)) == n:
            cert = tuple(sorted(
                (min(cols[a], cols[b]), max(cols[a], cols[b])) for a, b in edges
            ))
            if best[1] is None or cert < best[1]:
                best[0], best[1] = cols, cert
            return
        for v in _target_cell(cols):
            search(_individualize(cols, v))

    if n == 0:
        return [], ()
    search(start)
    return best[0], best[1]


def encode_certificate(n: int, certificate: Sequence[tuple[int, int]]) -> bytes:
    """Pack a certificate into bytes (little-endian uint16 fields)."""
    flat = [n, len(certificate)]
    for a, b in certificate:
        flat.extend((a, b))
    return struct.pack(f"<{len(flat)}H", *flat)


def decode_certificate(key: bytes) -> tuple[int, list[tuple[int, int]]]:
    values = struct.unpack(f"<{len(key) // 2}H", key)
    n, m = values[0], values[1]
    edges = [(values[2 + 2 * i], values[3 + 2 * i]) for i in range(m)]
    return n, edges
