"""
The non-backtracking graph of a small graph
===========================================

Oriented edges become vertices, and [u,v] -> [v,w] is an arc whenever w != u.
"""

from nbspectra.graph_core import complete, petal
from nbspectra.nb_construct import build_nb, nb_fraction, reconstruct_stats

# K4: 6 edges give 12 oriented edges, each with two ways forward
g = complete(4)
nb = build_nb(g)
print("K4:", nb.size, "vertices,", nb.arc_count, "arcs")
print("sum deg^2 - 2M =", sum(d * d for d in g.degrees) - 2 * g.m)

# oriented edge i and its reverse sit M positions apart
for i in range(3):
    print(nb.vertices[i], "<->", nb.vertices[nb.reverse(i)])

# the base graph's degree counts can be read back from the digraph alone
stats = reconstruct_stats(build_nb(petal(2, 3)))
print("petal(2,3) degrees recovered:", stats.degree_counts, "edges:", stats.edge_count)

# how rare NB graphs are among labelled digraphs
for n_nodes in (2, 4, 6, 8):
    f = nb_fraction(n_nodes)
    print(f"F({n_nodes}) = {float(f):.3e}")
