"""Level-1 guarantee on 3-regular graphs.

Every edge of a 3-regular graph (K4 aside) has one of three light cones at
p=1.  Their counts depend only on the number of crossed squares S and
isolated triangles T, so F_1 / n and the cut bound 3n/2 - S - T both become
functions of s = S/n and t = T/n.  Minimizing the ratio over the feasible
triangle gives a bound that holds for every such graph.
"""

from qaoakit.graph import count_crossed_squares, count_isolated_triangles, prism_graph
from qaoakit.maxcut_analysis import certify_instance, worst_case_ratio

wc = worst_case_ratio(grid=8)
print(f"worst (s, t) = ({wc.s:g}, {wc.t:g}), ratio bound {wc.ratio:.4f}")
print(f"at gamma = {wc.schedule.gammas[0]:.4f}, beta = {wc.schedule.betas[0]:.4f}")

print("\nsome grid points (s, t, ratio):")
for s, t, r in wc.samples[::6]:
    print(f"  {s:.3f} {t:.3f} {r:.4f}")

# A single instance does better than the worst case.
g = prism_graph(3)
print(f"\nprism: S={count_crossed_squares(g)}, T={count_isolated_triangles(g)}")
cert = certify_instance(g)
print(f"  M_1 = {cert.m1:.4f}, cut bound {cert.cut_upper_bound}, ratio >= {cert.ratio_lower_bound:.4f}")
