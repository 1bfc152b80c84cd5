"""
Circularly partite graphs
=========================

A labelling of the oriented edges by Z/k is circular when every arc moves the
label up by one. Each feasible k puts all k-th roots of unity into the
spectrum of D^-1 B.
"""

from nbspectra.graph_core import complete, complete_bipartite, cycle, petal, wheel
from nbspectra.partite import circular_partite_analysis, roots_of_unity_report

for name, g in [("C6", cycle(6)), ("K4", complete(4)), ("K23", complete_bipartite(2, 3)),
                ("petal(3,4)", petal(3, 4)), ("W6", wheel(6))]:
    rep = circular_partite_analysis(g)
    print(f"{name:11s} feasible k = {rep.feasible_k}")

rep = circular_partite_analysis(petal(3, 4))
print("classes for k = 4:", rep.witness.classes())

rou = roots_of_unity_report(petal(3, 4), 4)
print("x^4 - 1 divides the transition charpoly:", rou.divides)
print("eigenfunction residuals:", [f"{r:.1e}" for r in rou.residuals])
