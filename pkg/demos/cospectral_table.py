"""
Cospectral graphs for four operators
====================================

Counts of graphs (min degree >= 2) that share a spectrum with some other graph
on the same number of vertices. Keys are exact integer polynomials, so there
are no near-misses. Pass 7 as an argument for the n = 7 row (about 10 s).
"""

import sys

from nbspectra.cospectral import cospectral_scan, cospectral_witnesses

n_max = int(sys.argv[1]) if len(sys.argv) > 1 else 6
res = cospectral_scan(n_max)
print(res.to_csv())

for a, b in cospectral_witnesses(res, 6, "normalized_laplacian"):
    print("normalized-Laplacian mates on 6 vertices:", a, b)
