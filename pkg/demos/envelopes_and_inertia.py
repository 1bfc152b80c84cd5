"""
Singular values as spectral envelopes
=====================================

|lambda - a| sits between singular values of a I - L. At a = 0 and a = 1 the
second singular value is a valid lower bound; at a = 1/2 it is not, and the
right quantity is the smallest singular value on the complement of the
constants.
"""

from nbspectra.bounds import independence_numbers, inertia_bounds_check
from nbspectra.graph_core import complete, petal, wheel
from nbspectra.spectral import modulus_envelope

for a in (0.0, 1.0, 0.5):
    env = modulus_envelope(wheel(6), a)
    print(f"W6, a={a}: s2 {env.s2:.4f}  restricted {env.restricted_lower:.4f}  "
          f"min |lambda-a| {env.min_distance:.4f}  s_max {env.s_max:.4f}")

for name, g in [("K4", complete(4)), ("petal(2,3)", petal(2, 3))]:
    ind = independence_numbers(g)
    rep = inertia_bounds_check(g, 1.0, indep=ind)
    print(f"{name}: alpha_out {ind.alpha_out}, alpha_s_out {ind.alpha_s_out}, counts {rep.counts}")
    print("  all inequalities hold:", rep.all_hold)
