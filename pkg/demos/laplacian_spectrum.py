"""
Spectrum of the non-backtracking Laplacian
==========================================

L = I - D^-1 B lives in the disc of radius 1 about 1. Exact characteristic
polynomials pin down the structural facts, floats give the picture.
"""

import sys
from pathlib import Path

from nbspectra.cli import spectrum_svg
from nbspectra.graph_core import complete, complete_bipartite, petal
from nbspectra.spectral import build_laplacian, exact_identities

for name, g in [("K4", complete(4)), ("K33", complete_bipartite(3, 3)), ("petal(2,3)", petal(2, 3))]:
    lap = build_laplacian(g)
    cp = lap.charpoly
    print(f"{name}: dim {lap.size}, identities {exact_identities(lap).all_hold}")
    print("  charpoly(1) =", cp(1), " charpoly(2) =", cp(2), " bipartite:", g.is_bipartite())
    print("  multiplicity of 0:", cp.zero_multiplicity())
    for z, mult in lap.spectrum.clusters():
        print(f"    {z.real:+.6f}{z.imag:+.6f}i  x{mult}")

# drop an SVG of the petal spectrum next to this script (or wherever asked)
out = Path(sys.argv[1]) if len(sys.argv) > 1 else Path("petal23.svg")
out.write_text(spectrum_svg(build_laplacian(petal(2, 3)).spectrum.clusters(), "petal(2,3)"))
print("wrote", out)
