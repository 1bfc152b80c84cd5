"""Non-backtracking graph of a simple graph, and facts about it.

Oriented edges are indexed ``e_1..e_M`` = the sorted edges ``(u, v)`` with
``u < v``, followed by ``e_{M+i} = reverse(e_i)``; 0-based in code, so the
reversal of index ``i`` is ``(i + M) % 2M``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from math import comb
from typing import NamedTuple, Sequence

import numpy as np

from .errors import CapabilityError, PreconditionError, ReconstructionError
from .graph_core import ISOMORPHISM_CAP, SimpleGraph, are_isomorphic, find_isomorphism
from .linalg import RationalMatrix, write_matrix_market

NB_ISOMORPHISM_CAP = 64


class OrientedEdge(NamedTuple):
    inp: int
    out: int
    index: int


@dataclass(frozen=True)
class NBGraph:
    """Digraph on the ``2M`` oriented edges; ``B[i, j] = 1`` iff ``e_i -> e_j``."""

    graph: SimpleGraph
    vertices: tuple[OrientedEdge, ...]
    B: np.ndarray

    @property
    def size(self) -> int:
        return len(self.vertices)

    @property
    def m(self) -> int:
        return len(self.vertices) // 2

    def reverse(self, i: int) -> int:
        return (i + self.m) % self.size

    @cached_property
    def index(self) -> dict[tuple[int, int], int]:
        return {(e.inp, e.out): e.index for e in self.vertices}

    @cached_property
    def successors(self) -> tuple[tuple[int, ...], ...]:
        return tuple(tuple(int(j) for j in np.nonzero(row)[0]) for row in self.B)

    @cached_property
    def predecessors(self) -> tuple[tuple[int, ...], ...]:
        return tuple(tuple(int(i) for i in np.nonzero(col)[0]) for col in self.B.T)

    @property
    def out_degrees(self) -> tuple[int, ...]:
        return tuple(len(s) for s in self.successors)

    @property
    def arc_count(self) -> int:
        return int(self.B.sum())

    def arcs(self) -> list[tuple[int, int]]:
        return [(i, j) for i, succ in enumerate(self.successors) for j in succ]

    def weak_components(self) -> list[list[int]]:
        return _weak_components(self.successors, self.predecessors)

    def strong_components(self) -> list[list[int]]:
        return tarjan_scc(self.successors)

    def to_dict(self) -> dict:
        return {
            "vertices": [[e.inp, e.out] for e in self.vertices],
            "arcs": [list(a) for a in self.arcs()],
        }

    def matrix_market(self) -> str:
        return write_matrix_market(RationalMatrix(self.B.astype(object)))


def build_nb(g: SimpleGraph) -> NBGraph:
    if g.m == 0:
        raise PreconditionError("graph has no edges")
    m = g.m
    oriented = [(u, v) for u, v in g.edges] + [(v, u) for u, v in g.edges]
    verts = tuple(OrientedEdge(a, b, i) for i, (a, b) in enumerate(oriented))
    starting = [[] for _ in range(g.n)]
    for i, (a, _) in enumerate(oriented):
        starting[a].append(i)
    B = np.zeros((2 * m, 2 * m), dtype=np.int64)
    for i, (a, b) in enumerate(oriented):
        for j in starting[b]:
            if oriented[j][1] != a:
                B[i, j] = 1
    B.setflags(write=False)
    return NBGraph(g, verts, B)


def reversal_matrix(m: int) -> np.ndarray:
    """The block swap ``P = [[0, Id], [Id, 0]]`` of size ``2m``."""
    P = np.zeros((2 * m, 2 * m), dtype=np.int64)
    idx = np.arange(m)
    P[idx, idx + m] = 1
    P[idx + m, idx] = 1
    return P


def reversal_permutation(m: int) -> list[int]:
    return [(i + m) % (2 * m) for i in range(2 * m)]


# ---------------------------------------------------------------------------
# digraph connectivity

def tarjan_scc(successors: Sequence[Sequence[int]]) -> list[list[int]]:
    """Strongly connected components (iterative Tarjan)."""
    n = len(successors)
    index = [-1] * n
    low = [0] * n
    on_stack = [False] * n
    stack: list[int] = []
    comps: list[list[int]] = []
    counter = 0
    for root in range(n):
        if index[root] >= 0:
            continue
        work = [(root, 0)]
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack[root] = True
        while work:
            v, pos = work[-1]
            succ = successors[v]
            if pos < len(succ):
                work[-1] = (v, pos + 1)
                w = succ[pos]
                if index[w] < 0:
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    on_stack[w] = True
                    work.append((w, 0))
                elif on_stack[w]:
                    low[v] = min(low[v], index[w])
            else:
                work.pop()
                if work:
                    low[work[-1][0]] = min(low[work[-1][0]], low[v])
                if low[v] == index[v]:
                    comp = []
                    while True:
                        w = stack.pop()
                        on_stack[w] = False
                        comp.append(w)
                        if w == v:
                            break
                    comps.append(sorted(comp))
    return sorted(comps)


def _weak_components(successors, predecessors) -> list[list[int]]:
    n = len(successors)
    comp = [-1] * n
    out = []
    for s in range(n):
        if comp[s] >= 0:
            continue
        comp[s] = len(out)
        members, stack = [s], [s]
        while stack:
            x = stack.pop()
            for y in itertools.chain(successors[x], predecessors[x]):
                if comp[y] < 0:
                    comp[y] = comp[s]
                    members.append(y)
                    stack.append(y)
        out.append(sorted(members))
    return out


@dataclass(frozen=True)
class ConnectivityReport:
    kind: str  # "cycle_graph" | "nb_strongly_connected"
    not_cycle: bool
    at_least_two_cycles: bool
    nb_weakly_connected: bool
    nb_strongly_connected: bool

    @property
    def equivalence_holds(self) -> bool:
        return len({self.not_cycle, self.at_least_two_cycles, self.nb_weakly_connected,
                    self.nb_strongly_connected}) == 1


def connectivity_class(g: SimpleGraph) -> ConnectivityReport:
    """For connected ``g`` with min degree >= 2: cycle graph or not, with the
    four equivalent conditions evaluated independently."""
    if g.n == 0 or g.min_degree < 2:
        raise PreconditionError("connectivity_class needs min degree >= 2")
    if not g.is_connected():
        raise PreconditionError("connectivity_class needs a connected graph")
    nb = build_nb(g)
    not_cycle = not g.is_cycle()
    cyclomatic = g.m - g.n + 1
    weak = len(nb.weak_components()) == 1
    strong = len(nb.strong_components()) == 1
    return ConnectivityReport(
        "nb_strongly_connected" if not_cycle else "cycle_graph",
        not_cycle, cyclomatic >= 2, weak, strong,
    )


# ---------------------------------------------------------------------------
# reconstruction of base-graph statistics from the digraph alone

@dataclass(frozen=True)
class ReconstructionReport:
    edge_count: int
    degree_counts: dict[int, int]  # base degree d -> number of vertices c_d
    vertex_count: int


def reconstruct_stats(nb) -> ReconstructionReport:
    """Recover ``M``, ``N`` and the degree histogram of the base graph from
    the NB digraph (an :class:`NBGraph` or a square 0/1 adjacency matrix)."""
    B = nb.B if isinstance(nb, NBGraph) else np.asarray(nb)
    size = B.shape[0]
    if size % 2:
        raise ReconstructionError(f"odd number of vertices ({size})")
    out_deg = B.sum(axis=1)
    counts: dict[int, int] = {}
    for d in out_deg:
        counts[int(d) + 1] = counts.get(int(d) + 1, 0) + 1
    degree_counts = {}
    for d, cnt in sorted(counts.items()):
        if cnt % d:
            raise ReconstructionError(f"{cnt} vertices of out-degree {d - 1} is not a multiple of {d}")
        degree_counts[d] = cnt // d
    return ReconstructionReport(size // 2, degree_counts, sum(degree_counts.values()))


# ---------------------------------------------------------------------------
# isomorphism theorem

@dataclass(frozen=True)
class IsomorphismCheck:
    iso_graphs: bool
    iso_nb: bool

    @property
    def agree(self) -> bool:
        return self.iso_graphs == self.iso_nb

    def as_tuple(self) -> tuple[bool, bool, bool]:
        return self.iso_graphs, self.iso_nb, self.agree


def nb_digraphs_isomorphic(a: NBGraph, b: NBGraph) -> bool:
    """Directed-graph isomorphism search on the NB digraphs themselves."""
    if max(a.size, b.size) > NB_ISOMORPHISM_CAP:
        raise CapabilityError(f"NB isomorphism search capped at {NB_ISOMORPHISM_CAP} vertices")
    if a.size != b.size or a.arc_count != b.arc_count:
        return False
    return find_isomorphism(a.successors, a.predecessors, b.successors, b.predecessors) is not None


def nb_isomorphism_theorem_check(g1: SimpleGraph, g2: SimpleGraph) -> IsomorphismCheck:
    if max(g1.n, g2.n) > ISOMORPHISM_CAP:
        raise CapabilityError(f"isomorphism search capped at n <= {ISOMORPHISM_CAP}")
    if min(g1.min_degree, g2.min_degree) < 1:
        raise PreconditionError("both graphs need min degree >= 1")
    return IsomorphismCheck(are_isomorphic(g1, g2), nb_digraphs_isomorphic(build_nb(g1), build_nb(g2)))


# ---------------------------------------------------------------------------
# counting

def count_min_degree_graphs(n: int, m: int) -> int:
    """Labelled simple graphs on ``n`` vertices, ``m`` edges, no isolated vertex."""
    if n < 0 or m < 0:
        raise PreconditionError("n and m must be non-negative")
    return sum((-1) ** k * comb(n, k) * comb(comb(n - k, 2), m) for k in range(n + 1))


def nb_fraction(n_nodes: int) -> Fraction:
    """Fraction of labelled digraphs on ``n_nodes`` vertices that are NB graphs
    of labelled simple graphs with min degree >= 1."""
    if n_nodes < 1:
        raise PreconditionError("need at least one node")
    if n_nodes % 2:
        return Fraction(0)
    m = n_nodes // 2
    total = sum(count_min_degree_graphs(n, m) for n in range(n_nodes + 1))
    return Fraction(total, 2 ** (n_nodes * (n_nodes - 1)))


# ---------------------------------------------------------------------------
# bipartite NB graphs

@dataclass(frozen=True)
class BipartiteReport:
    nb_bipartite: bool
    graph_bipartite: bool
    reversal_pairs_split: bool  # some bipartition of the NB graph splits every {e, e^-1}
    forced_pairs_split: bool    # in every NB component containing e and e^-1 they get opposite colours
    coloring: tuple[int, ...] | None

    @property
    def equivalence_holds(self) -> bool:
        return self.nb_bipartite == self.graph_bipartite


def _two_color(n, adjacency):
    color = [-1] * n
    for s in range(n):
        if color[s] >= 0:
            continue
        color[s] = 0
        stack = [s]
        while stack:
            x = stack.pop()
            for y in adjacency[x]:
                if color[y] < 0:
                    color[y] = 1 - color[x]
                    stack.append(y)
                elif color[y] == color[x]:
                    return None
    return color


def bipartite_nb_partition_check(g: SimpleGraph) -> BipartiteReport:
    if g.n == 0 or g.min_degree < 2:
        raise PreconditionError("bipartite NB check needs min degree >= 2")
    nb = build_nb(g)
    und = [set(nb.successors[i]) | set(nb.predecessors[i]) for i in range(nb.size)]
    color = _two_color(nb.size, und)
    if color is None:
        return BipartiteReport(False, g.is_bipartite(), True, True, None)
    comp_of = {}
    for c, members in enumerate(nb.weak_components()):
        for v in members:
            comp_of[v] = c
    forced = all(
        color[i] != color[nb.reverse(i)]
        for i in range(nb.size) if comp_of[i] == comp_of[nb.reverse(i)]
    )
    with_pairs = [und[i] | {nb.reverse(i)} for i in range(nb.size)]
    joint = _two_color(nb.size, with_pairs)
    return BipartiteReport(True, g.is_bipartite(), joint is not None, forced,
                           tuple(joint if joint is not None else color))
