"""Cospectral classes among small graphs with minimum degree at least 2.

Every key is an exact characteristic polynomial, cleared to integers, so two
graphs collide exactly when they are cospectral. Classes are formed per
number of vertices.
"""

from __future__ import annotations

import csv
import io
import logging
import os
from collections import defaultdict
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .errors import CapabilityError, PreconditionError
from .graph_core import ENUMERATION_CAP, SimpleGraph, graphs_on, parse_graph6
from .linalg import CharPoly, RationalMatrix, char_poly
from .nb_construct import build_nb

log = logging.getLogger(__name__)

OPERATORS = ("adjacency", "normalized_laplacian", "nb_matrix", "nb_laplacian")
SHORT = {"adjacency": "A", "normalized_laplacian": "L", "nb_matrix": "NB_A", "nb_laplacian": "NB_L"}
DEFAULT_N_MAX = 7
# the first row of the table pools these orders
POOLED_ROW = ("<=6", range(4, 7))


@dataclass(frozen=True)
class SpectralKey:
    operator: str
    scale: int  # denominator cleared from the monic polynomial
    coeffs: tuple[int, ...]

    def to_bytes(self) -> bytes:
        return self.operator.encode() + b"|" + str(self.scale).encode() + b"|" + \
            ",".join(map(str, self.coeffs)).encode()


def operator_matrix(g: SimpleGraph, operator: str) -> RationalMatrix:
    if operator == "adjacency":
        return RationalMatrix(g.adjacency().astype(object))
    if operator == "normalized_laplacian":
        if g.min_degree < 1:
            raise PreconditionError("normalized Laplacian needs min degree >= 1")
        deg = g.degrees
        rows = [[Fraction(int(i == j)) - Fraction(int(a), deg[i]) for j, a in enumerate(row)]
                for i, row in enumerate(g.adjacency())]
        return RationalMatrix.from_fractions(rows)
    if operator == "nb_matrix":
        return RationalMatrix(build_nb(g).B.T.astype(object))
    if operator == "nb_laplacian":
        from .spectral import build_laplacian
        return build_laplacian(g).L
    raise PreconditionError(f"unknown operator {operator!r}; choose from {', '.join(OPERATORS)}")


def spectral_key(g: SimpleGraph, operator: str) -> SpectralKey:
    cp: CharPoly = char_poly(operator_matrix(g, operator))
    scale, coeffs = cp.integer_key()
    return SpectralKey(operator, scale, tuple(coeffs))


def _keys_for(g6: str) -> tuple[str, tuple[bytes, ...]]:
    g = parse_graph6(g6)
    return g6, tuple(spectral_key(g, op).to_bytes() for op in OPERATORS)


@dataclass
class ScanRow:
    label: str
    graphs: int
    counts: dict[str, int]

    def as_list(self) -> list:
        return [self.label, self.graphs] + [self.counts[op] for op in OPERATORS]


@dataclass
class ScanResult:
    per_n: dict[int, int] = field(default_factory=dict)               # n -> #graphs
    counts: dict[int, dict[str, int]] = field(default_factory=dict)  # n -> operator -> count
    classes: dict[int, dict[str, list[list[str]]]] = field(default_factory=dict)

    def rows(self) -> list[ScanRow]:
        out = []
        label, pooled = POOLED_ROW
        pool = [n for n in pooled if n in self.per_n]
        if pool:
            out.append(ScanRow(label, sum(self.per_n[n] for n in pool),
                               {op: sum(self.counts[n][op] for n in pool) for op in OPERATORS}))
        for n in sorted(self.per_n):
            if n > max(pooled):
                out.append(ScanRow(str(n), self.per_n[n], dict(self.counts[n])))
        return out

    def row(self, label: str) -> ScanRow:
        return next(r for r in self.rows() if r.label == label)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["n", "graphs"] + [SHORT[op] for op in OPERATORS])
        for r in self.rows():
            w.writerow(r.as_list())
        return buf.getvalue()


def _workers() -> int:
    try:
        return max(1, int(os.environ.get("NBSPECTRA_THREADS", "1")))
    except ValueError:
        return 1


def cospectral_scan(n_max: int = DEFAULT_N_MAX, min_degree: int = 2, allow_n8: bool = False,
                    n_min: int = 3, workers: int | None = None) -> ScanResult:
    if n_max > ENUMERATION_CAP:
        raise CapabilityError(f"scan is capped at n <= {ENUMERATION_CAP}")
    if n_max >= 8 and not allow_n8:
        raise CapabilityError("n = 8 takes minutes; pass allow_n8=True (--allow-n8)")
    workers = _workers() if workers is None else workers
    result = ScanResult()
    for n in range(n_min, n_max + 1):
        g6s = [g.to_graph6() for g in graphs_on(n, min_degree)]
        log.info("n=%d: %d graphs", n, len(g6s))
        if workers > 1 and len(g6s) > 50:
            with ProcessPoolExecutor(workers) as ex:
                keyed = list(ex.map(_keys_for, g6s, chunksize=32))
        else:
            keyed = [_keys_for(s) for s in g6s]
        result.per_n[n] = len(g6s)
        result.counts[n] = {}
        result.classes[n] = {}
        for idx, op in enumerate(OPERATORS):
            groups: dict[bytes, list[str]] = defaultdict(list)
            for g6, keys in keyed:  # keyed follows canonical order, so grouping is deterministic
                groups[keys[idx]].append(g6)
            classes = [c for c in groups.values() if len(c) > 1]
            result.classes[n][op] = classes
            result.counts[n][op] = sum(len(c) for c in classes)
    return result


def cospectral_witnesses(result: ScanResult, n: int, operator: str) -> list[tuple[str, str]]:
    """Pairs of non-isomorphic graphs (graph6) sharing a key; a class of size
    s contributes s - 1 consecutive pairs, so pairs cover the class."""
    if n not in result.classes:
        raise PreconditionError(f"scan has no data for n={n}")
    if operator not in OPERATORS:
        raise PreconditionError(f"unknown operator {operator!r}")
    return [(c[i], c[i + 1]) for c in result.classes[n][operator] for i in range(len(c) - 1)]


def key_spread(g: SimpleGraph) -> dict[str, np.ndarray]:
    """Float spectra of all four operators (diagnostics and plots)."""
    return {op: np.linalg.eigvals(operator_matrix(g, op).to_float()) for op in OPERATORS}
