"""Simple graphs: representation, I/O, generators, isomorphism, enumeration.

Vertices are always ``0..n-1``. A :class:`SimpleGraph` is immutable; its
edge tuple is sorted and every pair is stored as ``(u, v)`` with ``u < v``.

Isomorphism testing and canonical labelling share one colour-refinement
engine (:func:`refine_colors`) that works on coloured digraphs, so the same
code decides isomorphism of a base graph and of its non-backtracking graph.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from functools import cached_property, lru_cache
from math import comb
from typing import Iterable, Iterator, Sequence

import numpy as np

from .errors import CapabilityError, GraphParseError, PreconditionError

ENUMERATION_CAP = 8
ISOMORPHISM_CAP = 10


@dataclass(frozen=True)
class SimpleGraph:
    n: int
    edges: tuple[tuple[int, int], ...]

    def __post_init__(self):
        if self.n < 0:
            raise PreconditionError("vertex count must be non-negative")
        seen = set()
        for u, v in self.edges:
            if u == v:
                raise PreconditionError(f"loop at vertex {u}")
            if not (0 <= u < v < self.n):
                raise PreconditionError(f"edge ({u}, {v}) is not normalised or out of range for n={self.n}")
            if (u, v) in seen:
                raise PreconditionError(f"duplicate edge ({u}, {v})")
            seen.add((u, v))
        if list(self.edges) != sorted(self.edges):
            raise PreconditionError("edges must be sorted")

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Sequence[int]]) -> "SimpleGraph":
        """Build from arbitrary pairs; orientation and duplicates are normalised."""
        norm = set()
        for u, v in edges:
            u, v = int(u), int(v)
            if u == v:
                raise PreconditionError(f"loop at vertex {u}")
            if u < 0 or v < 0:
                raise PreconditionError("negative vertex index")
            norm.add((min(u, v), max(u, v)))
        return cls(int(n), tuple(sorted(norm)))

    @property
    def m(self) -> int:
        return len(self.edges)

    @cached_property
    def neighbors(self) -> tuple[tuple[int, ...], ...]:
        nb = [[] for _ in range(self.n)]
        for u, v in self.edges:
            nb[u].append(v)
            nb[v].append(u)
        return tuple(tuple(sorted(x)) for x in nb)

    @cached_property
    def degrees(self) -> tuple[int, ...]:
        return tuple(len(x) for x in self.neighbors)

    @property
    def min_degree(self) -> int:
        return min(self.degrees) if self.n else 0

    @property
    def max_degree(self) -> int:
        return max(self.degrees) if self.n else 0

    def degree_profile(self) -> "DegreeProfile":
        return DegreeProfile(self.degrees, self.min_degree, self.max_degree, self.m)

    def has_edge(self, u: int, v: int) -> bool:
        return v in self.neighbors[u]

    def adjacency(self) -> np.ndarray:
        a = np.zeros((self.n, self.n), dtype=np.int64)
        for u, v in self.edges:
            a[u, v] = a[v, u] = 1
        return a

    def relabel(self, perm: Sequence[int]) -> "SimpleGraph":
        """Image of the graph under ``v -> perm[v]``."""
        return SimpleGraph.from_edges(self.n, ((perm[u], perm[v]) for u, v in self.edges))

    def components(self) -> list[list[int]]:
        comp = [-1] * self.n
        out = []
        for s in range(self.n):
            if comp[s] >= 0:
                continue
            comp[s] = len(out)
            stack, members = [s], [s]
            while stack:
                x = stack.pop()
                for y in self.neighbors[x]:
                    if comp[y] < 0:
                        comp[y] = comp[s]
                        stack.append(y)
                        members.append(y)
            out.append(sorted(members))
        return out

    def subgraph(self, vertices: Sequence[int]) -> "SimpleGraph":
        """Induced subgraph, relabelled to ``0..len(vertices)-1`` in the given order."""
        index = {v: i for i, v in enumerate(vertices)}
        return SimpleGraph.from_edges(
            len(vertices), ((index[u], index[v]) for u, v in self.edges if u in index and v in index)
        )

    def is_connected(self) -> bool:
        return self.n <= 1 or len(self.components()) == 1

    def is_cycle(self) -> bool:
        """True iff the graph is a single cycle on all of its vertices."""
        return self.n >= 3 and self.m == self.n and all(d == 2 for d in self.degrees) and self.is_connected()

    def bipartition(self) -> list[int] | None:
        """A proper 2-colouring, or None if the graph has an odd cycle."""
        side = [-1] * self.n
        for s in range(self.n):
            if side[s] >= 0:
                continue
            side[s] = 0
            stack = [s]
            while stack:
                x = stack.pop()
                for y in self.neighbors[x]:
                    if side[y] < 0:
                        side[y] = 1 - side[x]
                        stack.append(y)
                    elif side[y] == side[x]:
                        return None
        return side

    def is_bipartite(self) -> bool:
        return self.bipartition() is not None

    def to_dict(self) -> dict:
        return {"n": self.n, "edges": [list(e) for e in self.edges]}

    @classmethod
    def from_dict(cls, data: dict) -> "SimpleGraph":
        return cls.from_edges(data["n"], data["edges"])

    def to_graph6(self) -> str:
        return to_graph6(self)

    def __repr__(self):
        return f"SimpleGraph(n={self.n}, m={self.m}, g6={to_graph6(self)!r})"


@dataclass(frozen=True)
class DegreeProfile:
    degrees: tuple[int, ...]
    min_degree: int
    max_degree: int
    m: int

    def histogram(self) -> dict[int, int]:
        hist: dict[int, int] = {}
        for d in self.degrees:
            hist[d] = hist.get(d, 0) + 1
        return dict(sorted(hist.items()))


# ---------------------------------------------------------------------------
# graph6 and edge lists

def _g6_size(n: int) -> str:
    if n < 63:
        return chr(n + 63)
    if n < 258048:
        return "~" + "".join(chr(((n >> s) & 63) + 63) for s in (12, 6, 0))
    return "~~" + "".join(chr(((n >> s) & 63) + 63) for s in (30, 24, 18, 12, 6, 0))


def to_graph6(g: SimpleGraph) -> str:
    """Standard graph6 encoding (upper triangle, column by column)."""
    bits = [1 if g.has_edge(i, j) else 0 for j in range(1, g.n) for i in range(j)]
    bits += [0] * (-len(bits) % 6)
    body = "".join(
        chr(63 + int("".join(map(str, bits[k:k + 6])), 2)) for k in range(0, len(bits), 6)
    )
    return _g6_size(g.n) + body


def parse_graph6(text: str) -> SimpleGraph:
    s = text.strip()
    if s.startswith(">>graph6<<"):
        s = s[10:]
    if not s:
        raise GraphParseError("empty graph6 string", 0)
    for pos, ch in enumerate(s):
        if not 63 <= ord(ch) <= 126:
            raise GraphParseError(f"invalid graph6 character {ch!r}", pos)
    if s[0] != "~":
        n, pos = ord(s[0]) - 63, 1
    elif len(s) > 1 and s[1] != "~":
        if len(s) < 4:
            raise GraphParseError("truncated size field", len(s))
        n = sum((ord(s[1 + i]) - 63) << (12 - 6 * i) for i in range(3))
        pos = 4
    else:
        if len(s) < 8:
            raise GraphParseError("truncated size field", len(s))
        n = sum((ord(s[2 + i]) - 63) << (30 - 6 * i) for i in range(6))
        pos = 8
    nbits = n * (n - 1) // 2
    need = (nbits + 5) // 6
    body = s[pos:]
    if len(body) != need:
        raise GraphParseError(
            f"expected {need} data bytes for n={n}, found {len(body)}", pos + min(len(body), need)
        )
    edges = []
    k = 0
    for j in range(1, n):
        for i in range(j):
            byte = ord(body[k // 6]) - 63
            if byte >> (5 - k % 6) & 1:
                edges.append((i, j))
            k += 1
    if nbits % 6:
        pad = (ord(body[-1]) - 63) & ((1 << (6 - nbits % 6)) - 1)
        if pad:
            raise GraphParseError("non-zero padding bits", pos + need - 1)
    return SimpleGraph.from_edges(n, edges)


_HEADER = re.compile(r"^\s*#?\s*n\s*[=:\s]\s*(\d+)\s*$", re.IGNORECASE)


def parse_edge_list(text: str) -> SimpleGraph:
    """Parse whitespace-separated ``u v`` lines (0-indexed).

    A header line ``n <int>`` (also ``n=<int>`` or ``# n <int>``) fixes the
    vertex count; otherwise it is one more than the largest index. Anything
    after ``#`` is a comment.
    """
    n_header = None
    pairs = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        m = _HEADER.match(line)
        if m:
            n_header = int(m.group(1))
            continue
        line = line.split("#", 1)[0].strip()  # comment lines and trailing comments
        if not line:
            continue
        parts = line.split()
        if len(parts) != 2:
            raise GraphParseError(f"expected two indices, got {line!r}", lineno)
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError:
            raise GraphParseError(f"non-integer index in {line!r}", lineno) from None
        if u < 0 or v < 0:
            raise GraphParseError("negative vertex index", lineno)
        if u == v:
            raise GraphParseError(f"loop {u} {u} is not allowed", lineno)
        pairs.append((u, v))
    top = 1 + max((max(p) for p in pairs), default=-1)
    if n_header is not None:
        if n_header < top:
            raise GraphParseError(f"header n={n_header} smaller than max index + 1 = {top}")
        top = n_header
    return SimpleGraph.from_edges(top, pairs)


def to_edge_list(g: SimpleGraph) -> str:
    lines = [f"n {g.n}"] + [f"{u} {v}" for u, v in g.edges]
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# generators

def cycle(n: int) -> SimpleGraph:
    if n < 3:
        raise PreconditionError("cycle needs N >= 3")
    return SimpleGraph.from_edges(n, ((i, (i + 1) % n) for i in range(n)))


def complete(n: int) -> SimpleGraph:
    if n < 2:
        raise PreconditionError("complete graph needs N >= 2")
    return SimpleGraph.from_edges(n, itertools.combinations(range(n), 2))


def path(m: int) -> SimpleGraph:
    """Path with ``m`` edges (``m + 1`` vertices)."""
    if m < 1:
        raise PreconditionError("path needs M >= 1")
    return SimpleGraph.from_edges(m + 1, ((i, i + 1) for i in range(m)))


def petal(p: int, k: int) -> SimpleGraph:
    """``p`` cycles of length ``k`` sharing the centre vertex 0."""
    if p < 1 or k < 3:
        raise PreconditionError("petal graph needs p >= 1 and k >= 3")
    edges = []
    nxt = 1
    for _ in range(p):
        ring = [0] + list(range(nxt, nxt + k - 1))
        nxt += k - 1
        edges += [(ring[i], ring[(i + 1) % k]) for i in range(k)]
    return SimpleGraph.from_edges(nxt, edges)


def wheel(n: int) -> SimpleGraph:
    """Wheel on ``n`` vertices: hub 0 joined to a cycle on ``1..n-1``."""
    if n < 4:
        raise PreconditionError("wheel needs N >= 4")
    rim = n - 1
    edges = [(0, i) for i in range(1, n)] + [(1 + i, 1 + (i + 1) % rim) for i in range(rim)]
    return SimpleGraph.from_edges(n, edges)


def complete_bipartite(a: int, b: int) -> SimpleGraph:
    if a < 1 or b < 1:
        raise PreconditionError("complete bipartite graph needs both sides non-empty")
    return SimpleGraph.from_edges(a + b, ((i, a + j) for i in range(a) for j in range(b)))


def disjoint_union(*graphs: SimpleGraph) -> SimpleGraph:
    edges, off = [], 0
    for g in graphs:
        edges += [(u + off, v + off) for u, v in g.edges]
        off += g.n
    return SimpleGraph.from_edges(off, edges)


GENERATORS = {
    "cycle": cycle,
    "complete": complete,
    "petal": petal,
    "wheel": wheel,
    "path": path,
    "bipartite": complete_bipartite,
    "complete_bipartite": complete_bipartite,
}


def generator(family: str, *params: int) -> SimpleGraph:
    try:
        fn = GENERATORS[family]
    except KeyError:
        raise PreconditionError(f"unknown family {family!r}; choose from {sorted(GENERATORS)}") from None
    try:
        return fn(*params)
    except TypeError as exc:
        raise PreconditionError(f"bad parameters for {family}: {exc}") from None


def parse_generator_spec(spec: str) -> SimpleGraph:
    """``"petal:2,3"`` -> ``petal(2, 3)``."""
    family, _, args = spec.partition(":")
    try:
        params = [int(a) for a in args.split(",") if a.strip()]
    except ValueError:
        raise PreconditionError(f"non-integer generator parameter in {spec!r}") from None
    return generator(family.strip(), *params)


def line_graph(g: SimpleGraph) -> SimpleGraph:
    """Vertex ``i`` of the result is ``g.edges[i]``."""
    if g.m < 1:
        raise PreconditionError("line graph of an edgeless graph")
    at = [[] for _ in range(g.n)]
    for i, (u, v) in enumerate(g.edges):
        at[u].append(i)
        at[v].append(i)
    pairs = set()
    for inc in at:
        pairs.update(itertools.combinations(inc, 2))
    return SimpleGraph.from_edges(g.m, pairs)


# ---------------------------------------------------------------------------
# colour refinement on coloured digraphs

def refine_colors(out_nbrs, in_nbrs, colors):
    """Coarsest equitable refinement of ``colors``.

    New colours are ranks of ``(old colour, out-multiset, in-multiset)``
    signatures, so the result is canonical: relabelling the input digraph
    permutes the output colours consistently. Pass ``in_nbrs=out_nbrs`` for
    undirected graphs.
    """
    colors = list(colors)
    ncol = len(set(colors))
    while True:
        sigs = [
            (colors[v], tuple(sorted(colors[w] for w in out_nbrs[v])),
             tuple(sorted(colors[w] for w in in_nbrs[v])))
            for v in range(len(colors))
        ]
        rank = {s: i for i, s in enumerate(sorted(set(sigs)))}
        colors = [rank[s] for s in sigs]
        if len(rank) == ncol:
            return colors
        ncol = len(rank)


def _initial_colors(out_nbrs, in_nbrs, base=None):
    n = len(out_nbrs)
    base = base if base is not None else [0] * n
    keys = [(base[v], len(out_nbrs[v]), len(in_nbrs[v])) for v in range(n)]
    rank = {k: i for i, k in enumerate(sorted(set(keys)))}
    return [rank[k] for k in keys]


def find_isomorphism(out1, in1, out2, in2, colors1=None, colors2=None):
    """A colour- and arc-preserving bijection ``V1 -> V2`` or None.

    Works on the disjoint union so both sides are refined with one shared
    colour vocabulary; individualises one vertex of ``G1`` against each
    candidate of ``G2`` and backtracks.
    """
    n = len(out1)
    if n != len(out2):
        return None
    if sum(map(len, out1)) != sum(map(len, out2)):
        return None
    uo = [list(x) for x in out1] + [[w + n for w in x] for x in out2]
    ui = [list(x) for x in in1] + [[w + n for w in x] for x in in2]
    base = (list(colors1) if colors1 else [0] * n) + (list(colors2) if colors2 else [0] * n)
    arcs2 = {(v, w) for v in range(n) for w in out2[v]}

    def balanced(col):
        a = sorted(col[:n])
        return a == sorted(col[n:])

    def search(col):
        col = refine_colors(uo, ui, col)
        if not balanced(col):
            return None
        cells: dict[int, list[int]] = {}
        for v, c in enumerate(col):
            cells.setdefault(c, []).append(v)
        target = None
        for c, members in sorted(cells.items(), key=lambda kv: (len(kv[1]), kv[0])):
            if len(members) > 2:
                target = members
                break
        if target is None:
            mapping = [0] * n
            for members in cells.values():
                a, b = sorted(members)
                mapping[a] = b - n
            if all((mapping[v], mapping[w]) in arcs2 for v in range(n) for w in out1[v]):
                return mapping
            return None
        u = target[0]
        for v in (x for x in target if x >= n):
            nc = [2 * c for c in col]
            nc[u] = nc[v] = 2 * col[u] + 1
            found = search(nc)
            if found is not None:
                return found
        return None

    return search(_initial_colors(uo, ui, base))


def are_isomorphic(g1: SimpleGraph, g2: SimpleGraph) -> bool:
    if max(g1.n, g2.n) > ISOMORPHISM_CAP:
        raise CapabilityError(f"isomorphism search is capped at n <= {ISOMORPHISM_CAP}")
    if g1.n != g2.n or g1.m != g2.m or sorted(g1.degrees) != sorted(g2.degrees):
        return False
    return find_isomorphism(g1.neighbors, g1.neighbors, g2.neighbors, g2.neighbors) is not None


def isomorphism(g1: SimpleGraph, g2: SimpleGraph) -> list[int] | None:
    """Vertex map ``g1 -> g2`` or None."""
    if g1.n != g2.n or g1.m != g2.m:
        return None
    return find_isomorphism(g1.neighbors, g1.neighbors, g2.neighbors, g2.neighbors)


# ---------------------------------------------------------------------------
# canonical form

def _bits_key(g: SimpleGraph, position: Sequence[int]) -> int:
    """Adjacency bitstring (graph6 order) of the relabelled graph as an integer."""
    n = g.n
    key = 0
    width = n * (n - 1) // 2
    for u, v in g.edges:
        a, b = sorted((position[u], position[v]))
        key |= 1 << (width - 1 - (b * (b - 1) // 2 + a))
    return key


def canonical_labeling(g: SimpleGraph) -> tuple[int, list[int]]:
    """Return ``(key, position)`` with ``key`` the lexicographically minimal
    adjacency bitstring over all labellings reachable by
    individualisation-refinement, ``position[v]`` the new label of ``v``.

    Interchangeable twins (vertices with equal neighbourhoods up to each
    other) are tried once per cell, which keeps empty, complete and complete
    multipartite graphs linear instead of factorial.
    """
    nb = g.neighbors
    nbset = [set(x) for x in nb]
    best: list = [None, None]

    def twins(u, v):
        return nbset[u] - {v} == nbset[v] - {u}

    def visit(col):
        col = refine_colors(nb, nb, col)
        cells: dict[int, list[int]] = {}
        for v, c in enumerate(col):
            cells.setdefault(c, []).append(v)
        target = None
        for c in sorted(cells):
            if len(cells[c]) > 1:
                target = cells[c]
                break
        if target is None:
            key = _bits_key(g, col)
            if best[0] is None or key < best[0]:
                best[0], best[1] = key, list(col)
            return
        tried: list[int] = []
        for v in target:
            if any(twins(u, v) for u in tried):
                continue
            tried.append(v)
            nc = [2 * c for c in col]
            nc[v] = 2 * col[v] + 1
            visit(nc)

    visit(_initial_colors(nb, nb))
    return best[0] if best[0] is not None else 0, best[1] if best[1] is not None else []


def canonical_form(g: SimpleGraph) -> str:
    """graph6 string of the canonical relabelling; equal iff isomorphic."""
    if g.n > ISOMORPHISM_CAP:
        raise CapabilityError(f"canonical form is capped at n <= {ISOMORPHISM_CAP}")
    _, pos = canonical_labeling(g)
    return to_graph6(g.relabel(pos)) if g.n else to_graph6(g)


def canonical_graph(g: SimpleGraph) -> SimpleGraph:
    _, pos = canonical_labeling(g)
    return g.relabel(pos) if g.n else g


# ---------------------------------------------------------------------------
# enumeration

@lru_cache(maxsize=None)
def _all_graphs(n: int) -> tuple[SimpleGraph, ...]:
    """One canonical representative per isomorphism class on ``n`` vertices."""
    if n == 1:
        return (SimpleGraph(1, ()),)
    return _extend(_all_graphs(n - 1), min_degree=0)


def _extend(parents: Iterable[SimpleGraph], min_degree: int) -> tuple[SimpleGraph, ...]:
    """All graphs on one more vertex whose deletion of the new vertex gives a
    parent, filtered to ``min degree >= min_degree``; deduplicated."""
    found: dict[int, SimpleGraph] = {}
    for g in parents:
        n = g.n
        deficient = [v for v in range(n) if g.degrees[v] < min_degree]
        if any(g.degrees[v] < min_degree - 1 for v in deficient):
            continue
        must = sum(1 << v for v in deficient)
        for mask in range(1 << n):
            if mask & must != must or bin(mask).count("1") < min_degree:
                continue
            child = SimpleGraph.from_edges(
                n + 1, list(g.edges) + [(v, n) for v in range(n) if mask >> v & 1]
            )
            key, pos = canonical_labeling(child)
            key = (child.m, key)
            if key not in found:
                found[key] = child.relabel(pos)
    return tuple(found[k] for k in sorted(found))


def graphs_on(n: int, min_degree: int = 0) -> tuple[SimpleGraph, ...]:
    """Isomorphism-class representatives on exactly ``n`` vertices."""
    if n > ENUMERATION_CAP:
        raise CapabilityError(f"enumeration is capped at n <= {ENUMERATION_CAP}")
    if n < 1:
        return ()
    if n == 1:
        return _all_graphs(1) if min_degree <= 0 else ()
    if min_degree <= 0 or n <= 6:
        return tuple(g for g in _all_graphs(n) if g.min_degree >= min_degree)
    return _filtered(n, min_degree)


@lru_cache(maxsize=None)
def _filtered(n: int, min_degree: int) -> tuple[SimpleGraph, ...]:
    return _extend(_all_graphs(n - 1), min_degree)


def enumerate_graphs(n_max: int, min_degree: int = 0, n_min: int = 1) -> Iterator[SimpleGraph]:
    """Yield one graph per isomorphism class with ``n_min <= n <= n_max``.

    Order is deterministic: by ``n``, then edge count, then canonical
    bitstring.
    """
    if n_max > ENUMERATION_CAP:
        raise CapabilityError(f"enumeration is capped at n <= {ENUMERATION_CAP}")
    for n in range(max(1, n_min), n_max + 1):
        yield from graphs_on(n, min_degree)


EDGE_ENUMERATION_CAP = 10


@lru_cache(maxsize=None)
def _connected_by_edges(m: int) -> tuple[SimpleGraph, ...]:
    """Connected graphs with exactly ``m`` edges, by adding one edge (inside,
    or to a new vertex) to the connected graphs with ``m - 1`` edges."""
    if m == 1:
        return (SimpleGraph(2, ((0, 1),)),)
    found: dict[tuple, SimpleGraph] = {}
    for g in _connected_by_edges(m - 1):
        children = [(g.n, (u, v)) for u in range(g.n) for v in range(u + 1, g.n) if not g.has_edge(u, v)]
        children += [(g.n + 1, (u, g.n)) for u in range(g.n)]
        for n, e in children:
            child = SimpleGraph.from_edges(n, list(g.edges) + [e])
            key, pos = canonical_labeling(child)
            if (n, key) not in found:
                found[(n, key)] = child.relabel(pos)
    return tuple(found[k] for k in sorted(found))


def graphs_by_edges(m: int) -> tuple[SimpleGraph, ...]:
    """Graphs with exactly ``m`` edges and no isolated vertex, up to isomorphism.

    Built as multisets of connected components, so ``n`` may reach ``2m``.
    """
    if m > EDGE_ENUMERATION_CAP:
        raise CapabilityError(f"edge enumeration is capped at m <= {EDGE_ENUMERATION_CAP}")
    if m < 1:
        return ()
    # components tagged (edges, index) and combined in non-decreasing order
    parts = [(k, i) for k in range(1, m + 1) for i in range(len(_connected_by_edges(k)))]
    out = []

    def grow(start: int, left: int, chosen: list):
        if left == 0:
            out.append(disjoint_union(*(_connected_by_edges(k)[i] for k, i in chosen)))
            return
        for j in range(start, len(parts)):
            k, _ = parts[j]
            if k <= left:
                grow(j, left - k, chosen + [parts[j]])

    grow(0, m, [])
    return tuple(out)


def count_labelled_graphs(n: int, m: int) -> int:
    return comb(comb(n, 2), m)
