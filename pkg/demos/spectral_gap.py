"""
How far the spectrum stays from 1
=================================

eps = min |1 - lambda| is squeezed between 1/(Delta-1) and a product bound
that improves when the graph is circularly k-partite. Petals make the upper
bound tight.
"""

from nbspectra.bounds import gap_report, petal_epsilon, wheel_bound
from nbspectra.graph_core import complete, petal, wheel

for p, k in [(2, 3), (2, 4), (3, 3), (2, 5)]:
    rep = gap_report(petal(p, k))
    print(f"petal({p},{k}): eps {rep.epsilon:.10f}  (2p-1)^(-1/k) {petal_epsilon(p, k):.10f}"
          f"  bound {rep.upper_bound_thm:.10f}")

rep = gap_report(complete(4))
print("K4:", {k: rep.to_dict()[k] for k in ("epsilon", "lower_bound", "upper_bound_thm", "E")})

# the wheel bound shrinks slowly with the hub degree
for delta in (10, 20, 100):
    print(f"wheel, hub degree {delta}: bound {wheel_bound(delta):.5f}")
for delta in (4, 6, 8):
    print(f"  W{delta + 1}: eps {gap_report(wheel(delta + 1)).epsilon:.5f}")
