"""Circularly k-partite graphs.

A labelling of the oriented edges by residues mod k is *circular* when every
non-backtracking arc ``[v,w] -> [w,z]`` raises the label by one. Finding one
is a potential problem: inside each weak component of the NB digraph fix a
BFS potential, and the closed-walk discrepancies of that potential all have
to vanish mod k. One gcd per component settles every k at once; what is left
is making all k residue classes non-empty, which only involves shifting the
components against each other.
"""

from __future__ import annotations

from cmath import exp, pi
from collections import deque
from dataclasses import dataclass
from functools import reduce
from operator import or_
from math import gcd

import numpy as np

from .errors import CapabilityError, PreconditionError
from .graph_core import SimpleGraph
from .linalg import char_poly, cyclotomic_xk_minus_1
from .nb_construct import NBGraph, build_nb

BRUTE_FORCE_CAP = 16  # 2M


@dataclass(frozen=True)
class CircularPartition:
    k: int
    label: tuple[int, ...]  # residue of oriented edge i

    def classes(self) -> list[list[int]]:
        out = [[] for _ in range(self.k)]
        for i, r in enumerate(self.label):
            out[r].append(i)
        return out

    def is_valid(self, nb: NBGraph) -> bool:
        if len(self.label) != nb.size or any(not 0 <= r < self.k for r in self.label):
            return False
        if any((self.label[i] + 1) % self.k != self.label[j] for i, j in nb.arcs()):
            return False
        return len(set(self.label)) == self.k


@dataclass(frozen=True)
class PartiteReport:
    feasible_k: tuple[int, ...]
    max_k: int
    witness: CircularPartition
    component_gcds: tuple[int, ...]

    def to_dict(self) -> dict:
        return {
            "feasible_k": list(self.feasible_k),
            "max_k": self.max_k,
            "component_gcds": list(self.component_gcds),
            "witness": list(self.witness.label),
        }


@dataclass
class _Component:
    nodes: list[int]
    potential: dict[int, int]
    gcd: int  # 0 when the constraint graph carries no cycle


def _potentials(nb: NBGraph) -> list[_Component]:
    succ, pred = nb.successors, nb.predecessors
    seen = [False] * nb.size
    comps = []
    for root in range(nb.size):
        if seen[root]:
            continue
        seen[root] = True
        pot = {root: 0}
        order = [root]
        queue = deque([root])
        while queue:
            x = queue.popleft()
            for y, step in [(y, 1) for y in succ[x]] + [(y, -1) for y in pred[x]]:
                if not seen[y]:
                    seen[y] = True
                    pot[y] = pot[x] + step
                    order.append(y)
                    queue.append(y)
        g = 0
        for x in order:
            for y in succ[x]:
                g = gcd(g, pot[x] + 1 - pot[y])
        comps.append(_Component(order, pot, g))
    return comps


def _cover_offsets(residue_sets: list[frozenset[int]], k: int) -> list[int] | None:
    """Offsets ``o_c`` with ``U (R_c + o_c) = Z_k``, or None."""
    if sum(len(r) for r in residue_sets) < k:
        return None
    order = sorted(range(len(residue_sets)), key=lambda c: -len(residue_sets[c]))
    full = frozenset(range(k))
    # cheap greedy pass first
    covered: set[int] = set()
    offsets = [0] * len(residue_sets)
    for c in order:
        best = max(range(k), key=lambda o: len({(r + o) % k for r in residue_sets[c]} - covered))
        offsets[c] = best
        covered |= {(r + best) % k for r in residue_sets[c]}
    if covered == full:
        return offsets
    remaining = [0] * (len(order) + 1)
    for i in range(len(order) - 1, -1, -1):
        remaining[i] = remaining[i + 1] + len(residue_sets[order[i]])

    def search(i: int, cov: frozenset[int]) -> bool:
        if cov == full:
            return True
        if i == len(order) or len(cov) + remaining[i] < k:
            return False
        rs = residue_sets[order[i]]
        tried = set()
        for o in range(1 if i == 0 else k):  # rotate the first component to 0
            shifted = frozenset((r + o) % k for r in rs)
            if shifted in tried:
                continue
            tried.add(shifted)
            offsets[order[i]] = o
            if search(i + 1, cov | shifted):
                return True
        return False

    return offsets if search(0, frozenset()) else None


def _partition_for(comps: list[_Component], size: int, k: int) -> CircularPartition | None:
    if k > size or any(c.gcd % k for c in comps):
        return None
    sets = [frozenset(p % k for p in c.potential.values()) for c in comps]
    offsets = _cover_offsets(sets, k)
    if offsets is None:
        return None
    label = [0] * size
    for c, o in zip(comps, offsets):
        for x, p in c.potential.items():
            label[x] = (p + o) % k
    return CircularPartition(k, tuple(label))


def circular_partite_analysis(g: SimpleGraph) -> PartiteReport:
    if g.m == 0 or g.min_degree < 1:
        raise PreconditionError("circular partite analysis needs min degree >= 1")
    nb = build_nb(g)
    comps = _potentials(nb)
    feasible = []
    witness = None
    for k in range(1, nb.size + 1):
        part = _partition_for(comps, nb.size, k)
        if part is not None:
            feasible.append(k)
            witness = part
    return PartiteReport(tuple(feasible), feasible[-1], witness, tuple(c.gcd for c in comps))


def circular_partition(g: SimpleGraph, k: int) -> CircularPartition | None:
    nb = build_nb(g)
    return _partition_for(_potentials(nb), nb.size, k)


def brute_force_partite(g: SimpleGraph, k: int) -> bool:
    """Small-instance oracle with no potentials and no gcd.

    Every weak component is labelled by plain backtracking over residues,
    collecting the residue set of each consistent labelling; a search over
    those sets then asks whether one choice per component covers all k.
    """
    nb = build_nb(g)
    if nb.size > BRUTE_FORCE_CAP:
        raise CapabilityError(f"brute force partite is capped at 2M <= {BRUTE_FORCE_CAP}")
    if k < 1:
        raise PreconditionError("k must be positive")
    succ, pred = nb.successors, nb.predecessors
    label = [-1] * nb.size

    def consistent(x: int) -> bool:
        r = label[x]
        return all(label[y] < 0 or label[y] == (r + 1) % k for y in succ[x]) and \
            all(label[y] < 0 or (label[y] + 1) % k == r for y in pred[x])

    def labellings(order: list[int]) -> set[int]:
        masks: set[int] = set()

        def go(i: int):
            if i == len(order):
                masks.add(reduce(or_, (1 << label[x] for x in order)))
                return
            x = order[i]
            for r in range(k):
                label[x] = r
                if consistent(x):
                    go(i + 1)
            label[x] = -1

        go(0)
        return masks

    options, seen = [], set()
    for root in range(nb.size):
        if root in seen:
            continue
        seen.add(root)
        order, queue = [], deque([root])
        while queue:
            x = queue.popleft()
            order.append(x)
            for y in list(succ[x]) + list(pred[x]):
                if y not in seen:
                    seen.add(y)
                    queue.append(y)
        masks = labellings(order)
        if not masks:
            return False
        options.append(masks)
    reachable = {0}
    for masks in options:
        reachable = {r | m for r in reachable for m in masks}
    return (1 << k) - 1 in reachable


@dataclass(frozen=True)
class RootsOfUnityReport:
    k: int
    divides: bool  # x^k - 1 | charpoly(D^-1 A), exactly
    residuals: tuple[float, ...]  # ||T f - omega^j f|| / ||f|| for the explicit eigenfunctions

    def __bool__(self) -> bool:
        return self.divides


def roots_of_unity_report(g: SimpleGraph, k: int, tol: float = 1e-10) -> RootsOfUnityReport:
    from .spectral import build_laplacian

    part = circular_partition(g, k)
    if part is None:
        raise PreconditionError(f"graph is not circularly {k}-partite")
    lap = build_laplacian(g)
    divides = lap.transition_charpoly.divisible_by(cyclotomic_xk_minus_1(k))
    T = lap.T_float
    labels = np.array(part.label)
    res = []
    for j in range(k):
        omega = exp(2j * pi * j / k)
        f = omega ** labels
        res.append(float(np.linalg.norm(T @ f - omega * f) / np.linalg.norm(f)))
    return RootsOfUnityReport(k, divides, tuple(res))


def roots_of_unity_eigenvalues(g: SimpleGraph, k: int, tol: float = 1e-10) -> bool:
    rep = roots_of_unity_report(g, k)
    return rep.divides and max(rep.residuals) <= tol


def digraph_period(nb: NBGraph) -> int:
    """Period of a strongly connected digraph from BFS levels:
    gcd of ``level(u) + 1 - level(v)`` over arcs ``u -> v``."""
    if len(nb.strong_components()) != 1:
        raise PreconditionError("period is defined here for strongly connected digraphs")
    level = {0: 0}
    queue = deque([0])
    while queue:
        x = queue.popleft()
        for y in nb.successors[x]:
            if y not in level:
                level[y] = level[x] + 1
                queue.append(y)
    return reduce(gcd, (abs(level[u] + 1 - level[v]) for u, v in nb.arcs()), 0)


def nb_k_colorable(nb: NBGraph, k: int) -> bool:
    """Proper k-colouring of the NB digraph viewed as an undirected graph."""
    adj = [set(nb.successors[x]) | set(nb.predecessors[x]) for x in range(nb.size)]
    order = sorted(range(nb.size), key=lambda x: -len(adj[x]))
    color = [-1] * nb.size

    def go(i: int) -> bool:
        if i == len(order):
            return True
        x = order[i]
        used = {color[y] for y in adj[x]}
        for c in range(k):
            if c not in used:
                color[x] = c
                if go(i + 1):
                    return True
        color[x] = -1
        return False

    return go(0)
