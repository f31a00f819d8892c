"""Ring of disagrees: M_p / n for the first few levels.

On a long ring every edge sees the same neighborhood, a path of 2p + 2
vertices, so one small simulation gives the whole expected cut.
"""

from qaoakit.graph import decompose, ring_graph
from qaoakit.optimizer import maximize_fp

n = 100
previous = None
for p in (1, 2, 3):
    d = decompose(ring_graph(n), p)
    (entry,) = d.entries.values()
    print(f"p={p}: one subgraph type on {entry.subgraph.n_vertices} vertices, weight {entry.weight}")

    # Warm-start from the level below so M_p never drops.
    previous = maximize_fp(d, p, previous=previous)
    ratio = previous.best_value / n
    print(f"  M_p/n = {ratio:.6f}   (2p+1)/(2p+2) = {(2 * p + 1) / (2 * p + 2):.6f}")
    print(f"  gammas = {[round(g, 4) for g in previous.best_schedule.gammas]}")
    print(f"  betas  = {[round(b, 4) for b in previous.best_schedule.betas]}")
