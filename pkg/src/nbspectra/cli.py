"""``nbspectra`` command line.

Exit codes: 0 ok, 1 a theorem check failed, 2 usage / input error,
3 a desk-scale cap was hit.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from fractions import Fraction
from pathlib import Path

import numpy as np

from .errors import CapabilityError, GraphParseError, NBSpectraError, PreconditionError
from .graph_core import SimpleGraph, parse_edge_list, parse_generator_spec, parse_graph6

EXIT_OK, EXIT_CHECK, EXIT_USAGE, EXIT_CAP = 0, 1, 2, 3
DIGITS = 12
SNAP = 1e-10  # plot labels: smaller parts print as 0
GRAPH6_SUFFIXES = {".g6", ".graph6", ".s6"}


class UsageError(NBSpectraError):
    pass


def _clean(x):
    """JSON-ready copy: 12 significant digits, rationals as "p/q"."""
    if isinstance(x, bool) or x is None or isinstance(x, str):
        return x
    if isinstance(x, Fraction):
        return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
    if isinstance(x, (int, np.integer)):
        return int(x)
    if isinstance(x, (float, np.floating)):
        return float(f"{float(x):.{DIGITS}g}") + 0.0  # + 0.0 folds -0.0
    if isinstance(x, (complex, np.complexfloating)):
        return {"re": _clean(x.real), "im": _clean(x.imag)}
    if isinstance(x, dict):
        return {str(k): _clean(v) for k, v in x.items()}
    if isinstance(x, (list, tuple, set, frozenset, np.ndarray)):
        items = sorted(x) if isinstance(x, (set, frozenset)) else list(x)
        return [_clean(v) for v in items]
    if hasattr(x, "__dict__"):
        return _clean(vars(x))
    return str(x)


def dumps(obj) -> str:
    return json.dumps(_clean(obj), indent=2, sort_keys=True) + "\n"


def load_graph(args) -> SimpleGraph:
    if bool(args.input) == bool(args.gen):
        raise UsageError("give exactly one of --in or --gen")
    if args.gen:
        return parse_generator_spec(args.gen)
    path = Path(args.input)
    try:
        text = path.read_text()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror or exc}") from None
    if path.suffix in GRAPH6_SUFFIXES:
        lines = [ln for ln in text.splitlines() if ln.strip()]
        if not lines:
            raise GraphParseError("empty graph6 file", 0)
        return parse_graph6(lines[0].strip())
    return parse_edge_list(text)


def emit(args, text: str):
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------------------
# subcommands

def cmd_build(args) -> int:
    from .nb_construct import build_nb

    g = load_graph(args)
    nb = build_nb(g)
    doc = {"graph": g.to_dict(), "nb": nb.to_dict(), "size": nb.size, "arcs": nb.arc_count}
    if args.out:
        out = Path(args.out)
        out.write_text(dumps(doc))
        out.with_suffix(".mtx").write_text(nb.matrix_market())
    else:
        doc["matrix_market"] = nb.matrix_market()
        sys.stdout.write(dumps(doc))
    return EXIT_OK


def cmd_spectrum(args) -> int:
    from .cospectral import OPERATORS, operator_matrix
    from .linalg import char_poly, eigenvalues, singular_values

    g = load_graph(args)
    op = args.operator
    if op == "transition":
        from .spectral import build_laplacian
        m = build_laplacian(g).T
    elif op in OPERATORS:
        m = operator_matrix(g, op)
    else:
        raise UsageError(f"unknown operator {op!r}")
    spec = eigenvalues(m, args.tol, op)
    doc = {
        "operator": op,
        "dim": m.n,
        "charpoly": list(char_poly(m).coeffs),
        "eigenvalues": spec.to_json(DIGITS),
        "singular_values": list(singular_values(m).values),
    }
    emit(args, dumps(doc))
    return EXIT_OK


def cmd_gap(args) -> int:
    from .bounds import gap_report

    rep = gap_report(load_graph(args), args.tol)
    emit(args, dumps(rep.to_dict()))
    return EXIT_OK if rep.all_ok else EXIT_CHECK


def cmd_partite(args) -> int:
    from .partite import circular_partite_analysis

    rep = circular_partite_analysis(load_graph(args))
    emit(args, dumps(rep.to_dict()))
    return EXIT_OK


def cmd_independence(args) -> int:
    from .bounds import independence_numbers, inertia_bounds_check

    g = load_graph(args)
    ind = independence_numbers(g)
    doc = {"alpha_out": ind.alpha_out, "alpha_s_out": ind.alpha_s_out}
    code = EXIT_OK
    if g.min_degree >= 2:
        rep = inertia_bounds_check(g, args.a, args.tol, indep=ind)
        doc.update(a=args.a, thresholds=rep.thresholds, counts=rep.counts,
                   inequalities=rep.inequalities, gram_formulas=[rep.gram_L_ok, rep.gram_T_ok])
        code = EXIT_OK if rep.all_hold else EXIT_CHECK
    emit(args, dumps(doc))
    return code


def cmd_verify(args) -> int:
    from .verify import verify_graph

    rep = verify_graph(load_graph(args), args.tol)
    emit(args, dumps(rep.to_dict()))
    for c in rep.failures:
        print(f"FAILED {c.name}: {json.dumps(_clean(c.detail), sort_keys=True)}", file=sys.stderr)
    return EXIT_OK if rep.ok else EXIT_CHECK


def cmd_scan(args) -> int:
    from .cospectral import cospectral_scan

    res = cospectral_scan(args.max_n, args.min_degree, allow_n8=args.allow_n8)
    emit(args, res.to_csv())
    return EXIT_OK


def cmd_fraction(args) -> int:
    from .nb_construct import nb_fraction

    f = nb_fraction(args.nodes)
    emit(args, dumps({"nodes": args.nodes, "fraction": f, "value": float(f)}))
    return EXIT_OK


def cmd_plot(args) -> int:
    from .linalg import eigenvalues
    from .spectral import build_laplacian

    g = load_graph(args)
    spec = eigenvalues(build_laplacian(g).L, args.tol, "nb_laplacian")
    emit(args, spectrum_svg(spec.clusters(), title=g.to_graph6()))
    return EXIT_OK


def spectrum_svg(clusters, title: str = "", size: int = 400) -> str:
    """Eigenvalues in the disc D(1,1); clusters with multiplicity > 1 are labelled."""
    pad = 30
    scale = (size - 2 * pad) / 2.2

    def xy(z: complex) -> tuple[str, str]:
        return f"{pad + (z.real + 0.1) * scale:.3f}", f"{size / 2 - z.imag * scale:.3f}"

    cx, cy = xy(1 + 0j)
    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" viewBox="0 0 {size} {size}">',
        f"<title>{title}</title>",
        f'<line x1="{pad}" y1="{size / 2}" x2="{size - pad}" y2="{size / 2}" stroke="#999" stroke-width="0.5"/>',
        f'<line x1="{cx}" y1="{pad}" x2="{cx}" y2="{size - pad}" stroke="#999" stroke-width="0.5"/>',
        f'<circle cx="{cx}" cy="{cy}" r="{scale:.3f}" fill="none" stroke="#333" stroke-width="1"/>',
    ]
    for z, mult in clusters:
        z = complex(*(0.0 if abs(t) <= SNAP else t for t in (z.real, z.imag)))
        x, y = xy(z)
        out.append(f'<circle cx="{x}" cy="{y}" r="3.5" fill="#c0392b"><title>{z.real:.6g}{z.imag:+.6g}i (x{mult})</title></circle>')
        if mult > 1:
            out.append(f'<text x="{float(x) + 5:.3f}" y="{float(y) - 5:.3f}" font-size="10">{mult}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


# ---------------------------------------------------------------------------

def _tol(text: str) -> float:
    t = float(text)
    if not 0 < t <= 1e-2:
        raise argparse.ArgumentTypeError("--tol must lie in (0, 1e-2]")
    return t


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="nbspectra", description="Non-backtracking graph spectra toolkit")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    def graph_cmd(name, fn, help_):
        s = sub.add_parser(name, help=help_)
        s.add_argument("--in", dest="input", metavar="PATH", help="graph6 (.g6) or edge-list file")
        s.add_argument("--gen", metavar="FAMILY:PARAMS", help="e.g. petal:2,3, complete:4, wheel:6")
        s.add_argument("--tol", type=_tol, default=1e-8)
        s.add_argument("--out", metavar="PATH")
        s.set_defaults(fn=fn)
        return s

    graph_cmd("build", cmd_build, "dump the NB graph (JSON + Matrix Market)")
    s = graph_cmd("spectrum", cmd_spectrum, "exact charpoly and eigenvalues of an operator")
    s.add_argument("--operator", default="nb_laplacian",
                   help="adjacency, normalized_laplacian, nb_matrix, nb_laplacian, transition")
    graph_cmd("gap", cmd_gap, "spectral gap from 1 and its bounds")
    graph_cmd("partite", cmd_partite, "circular k-partite analysis")
    s = graph_cmd("independence", cmd_independence, "out-independence numbers and inertia counts")
    s.add_argument("--a", type=float, default=1.0)
    graph_cmd("verify", cmd_verify, "run every theorem check on one graph")
    graph_cmd("plot", cmd_plot, "SVG of the NB Laplacian spectrum in D(1,1)")

    s = sub.add_parser("scan", help="cospectral counts per operator (CSV)")
    s.add_argument("--max-n", type=int, default=7)
    s.add_argument("--min-degree", type=int, default=2)
    s.add_argument("--allow-n8", action="store_true")
    s.add_argument("--out", metavar="PATH")
    s.set_defaults(fn=cmd_scan)

    s = sub.add_parser("fraction", help="fraction of labelled digraphs on N nodes that are NB graphs")
    s.add_argument("nodes", type=int)
    s.add_argument("--out", metavar="PATH")
    s.set_defaults(fn=cmd_fraction)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.fn(args)
    except CapabilityError as exc:
        print(f"nbspectra: {exc}", file=sys.stderr)
        return EXIT_CAP
    except (UsageError, GraphParseError, PreconditionError, OSError) as exc:
        print(f"nbspectra: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except NBSpectraError as exc:
        print(f"nbspectra: {exc}", file=sys.stderr)
        return EXIT_CHECK


if __name__ == "__main__":
    sys.exit(main())
