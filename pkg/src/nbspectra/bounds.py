"""Quantitative bounds on the NB Laplacian spectrum.

Spectral gap from 1, the petal closed form, cycle signatures, out-independence
numbers and the inertia-type counts of singular values.
"""

from __future__ import annotations

import csv
import io
from cmath import exp, pi
from dataclasses import dataclass, field
from fractions import Fraction
from math import log, sqrt

import numpy as np

from .errors import CapabilityError, PreconditionError
from .graph_core import SimpleGraph
from .linalg import (DEFAULT_TOL, RationalMatrix, Spectrum, geometric_multiplicity,
                     singular_values)
from .nb_construct import build_nb
from .partite import circular_partite_analysis
from .spectral import NBLaplacian, build_laplacian

INDEPENDENCE_CAP = 30  # 2M; K6 has 2M = 30
CYCLE_CAP = 24  # 2M


def has_cycle_component(g: SimpleGraph) -> bool:
    return any(g.subgraph(c).is_cycle() for c in g.components())


# ---------------------------------------------------------------------------
# spectral gap from 1

def theorem_upper_bound(g: SimpleGraph, k: int) -> float:
    """``(prod (deg v - 1)^(deg v - 1))^(-1/(2M - k))``, via logs."""
    if 2 * g.m - k <= 0:
        raise PreconditionError("2M - k must be positive")
    s = sum((d - 1) * log(d - 1) for d in g.degrees if d > 1)
    return float(np.exp(-s / (2 * g.m - k)))


def wheel_bound(delta: int) -> float:
    """The theorem bound for the wheel with hub degree ``delta`` (k = 1)."""
    s = (delta - 1) * log(delta - 1) + 2 * delta * log(2)
    return float(np.exp(-s / (4 * delta - 1)))


@dataclass
class GapReport:
    epsilon: float
    E: float
    max_k: int
    lower_bound: float
    upper_bound_thm: float | None
    corollary_bound: float
    conjecture_bound: float
    lower_ok: bool
    upper_ok: bool | None      # eps <= bound + tol
    chain_ok: bool | None      # bound <= E + 2 tol
    E_is_one: bool | None      # only meaningful when max_k > 1
    corollary_ok: bool
    conjecture_holds: bool     # reported, never asserted
    note: str = ""

    @property
    def all_ok(self) -> bool:
        flags = [self.lower_ok, self.upper_ok, self.chain_ok, self.E_is_one, self.corollary_ok]
        return all(f is not False for f in flags)

    def to_dict(self) -> dict:
        return dict(self.__dict__)


def gap_from_spectrum(values: np.ndarray) -> tuple[float, float]:
    """``(eps, E)``; E drops the single value coming from lambda = 0."""
    dist = np.abs(1 - values)
    eps = float(dist.min())
    rest = np.delete(dist, int(np.argmin(np.abs(values))))
    return eps, float(rest.max()) if rest.size else eps


def gap_report(g: SimpleGraph, tol: float = DEFAULT_TOL, lap: NBLaplacian | None = None,
               max_k: int | None = None) -> GapReport:
    lap = build_laplacian(g) if lap is None else lap
    eps, E = gap_from_spectrum(lap.spectrum.values)
    delta, Delta = g.min_degree, g.max_degree
    k = circular_partite_analysis(g).max_k if max_k is None else max_k
    lower = 1 / (Delta - 1)
    corollary = (delta - 1) ** (-(delta - 1) / Delta)
    conj = 1 / (delta - 1)
    rep = GapReport(eps, E, k, lower, None, corollary, conj,
                    eps >= lower - tol, None, None, None,
                    eps <= corollary + tol, eps <= conj + tol)
    if has_cycle_component(g):
        rep.note = "cycle-graph component: theorem chain not applicable"
        return rep
    ub = theorem_upper_bound(g, k)
    rep.upper_bound_thm = ub
    rep.upper_ok = eps <= ub + tol
    rep.chain_ok = ub <= E + 2 * tol
    if k > 1:
        rep.E_is_one = abs(E - 1) <= tol
    return rep


# ---------------------------------------------------------------------------
# petal graphs

def _roots(k: int, radius: float = 1.0, phase: float = 0.0) -> list[complex]:
    return [radius * exp(1j * (2 * pi * j + phase) / k) for j in range(k)]


def petal_transition_spectrum(p: int, k: int) -> np.ndarray:
    """Closed-form eigenvalues of ``D^-1 A`` for ``petal(p, k)``.

    ``charpoly = (x^k - 1)(x^k - q)^p (x^k + q)^(p-1)`` with ``q = 1/(2p-1)``.
    """
    if p < 2 or k < 3:
        raise PreconditionError("petal spectrum needs p >= 2 and k >= 3")
    r = (2 * p - 1) ** (-1 / k)
    vals = _roots(k) + _roots(k, r) * p + _roots(k, r, pi) * (p - 1)
    return np.array(vals)


def petal_spectrum(p: int, k: int) -> Spectrum:
    vals = 1 - petal_transition_spectrum(p, k)
    return Spectrum(vals, operator="nb_laplacian", dim=2 * p * k, raw=vals)


def petal_listed_values(p: int, k: int) -> np.ndarray:
    """The two families ``omega_j`` and ``omega_j (2p-1)^(-1/k)`` of ``D^-1 A``."""
    if p < 2 or k < 3:
        raise PreconditionError("petal spectrum needs p >= 2 and k >= 3")
    return np.array(_roots(k) + _roots(k, (2 * p - 1) ** (-1 / k)))


def petal_epsilon(p: int, k: int) -> float:
    return (2 * p - 1) ** (-1 / k)


# ---------------------------------------------------------------------------
# cycle signatures

def chordless_cycles(g: SimpleGraph) -> list[tuple[int, ...]]:
    """Induced cycles, each listed once starting from its least vertex."""
    nbrs = [set(g.neighbors[v]) for v in range(g.n)]
    out = []

    def extend(path: list[int]):
        s, last = path[0], path[-1]
        inner = set(path[1:-1])
        for w in nbrs[last]:
            if w == s:
                if len(path) >= 3 and path[1] < path[-1]:  # one orientation only
                    out.append(tuple(path))
            elif w > s and w not in path and not nbrs[w] & inner:
                extend(path + [w])

    for s in range(g.n):
        for w in nbrs[s]:
            if w > s:
                extend([s, w])
    # pruning only rules out chords to the interior; chords to s are filtered here
    return [c for c in out if _is_induced_cycle(c, nbrs)]


def _is_induced_cycle(c: tuple[int, ...], nbrs) -> bool:
    n = len(c)
    idx = {v: i for i, v in enumerate(c)}
    for i, v in enumerate(c):
        for w in nbrs[v]:
            if w in idx and (idx[w] - i) % n not in (1, n - 1):
                return False
    return True


@dataclass
class CycleSignature:
    cycle: tuple[int, ...]
    kind: str  # "regular" (all degree d) or "one-big" (one vertex of degree d, rest 2)
    d: int
    length: int
    predicted: tuple  # Fractions for "regular", floats for "one-big"
    present: tuple[bool, ...]


@dataclass
class CycleSignatureReport:
    signatures: list[CycleSignature]
    multiplicity_checks: list[dict] = field(default_factory=list)

    @property
    def all_present(self) -> bool:
        return all(all(s.present) for s in self.signatures)

    @property
    def multiplicities_ok(self) -> bool:
        return all(c["geometric"] >= c["cycles"] for c in self.multiplicity_checks)


def cycle_signature_check(g: SimpleGraph, tol: float = DEFAULT_TOL) -> CycleSignatureReport:
    lap = build_laplacian(g)
    if lap.size > CYCLE_CAP:
        raise CapabilityError(f"cycle enumeration is capped at 2M <= {CYCLE_CAP}")
    deg = g.degrees
    sigs = []
    for c in chordless_cycles(g):
        ds = sorted(deg[v] for v in c)
        even = len(c) % 2 == 0
        if ds[0] == ds[-1] and ds[0] >= 3:
            d = ds[0]
            vals = [1 - Fraction(1, d - 1)] + ([1 + Fraction(1, d - 1)] if even else [])
            sigs.append(CycleSignature(c, "regular", d, len(c), tuple(vals),
                                       tuple(lap.is_eigenvalue(v) for v in vals)))
        elif ds[-1] > 2 and ds[-2] == 2:
            d = ds[-1]
            r = (d - 1) ** (-1 / len(c))
            vals = [1 - r] + ([1 + r] if even else [])
            sigs.append(CycleSignature(c, "one-big", d, len(c), tuple(vals),
                                       tuple(lap.spectrum.contains(v, tol) for v in vals)))
    report = CycleSignatureReport(sigs)
    # geometric multiplicity lower bounds (exact for the rational values)
    groups: dict[tuple, int] = {}
    for s in sigs:
        for i, v in enumerate(s.predicted):
            key = (s.kind, s.d, s.length if s.kind == "one-big" else 0, i)
            groups[key] = groups.get(key, 0) + 1
    L = lap.L
    for (kind, d, length, i), count in sorted(groups.items()):
        if kind == "regular":
            value = 1 - Fraction(1, d - 1) if i == 0 else 1 + Fraction(1, d - 1)
            geo = geometric_multiplicity(L, value)
            report.multiplicity_checks.append(
                {"kind": kind, "d": d, "value": value, "cycles": count, "geometric": geo})
        else:
            r = (d - 1) ** (-1 / length)
            value = 1 - r if i == 0 else 1 + r
            _, s, _ = np.linalg.svd(lap.L_float - value * np.eye(lap.size))
            geo = int(np.sum(s <= 1e-7 * max(1.0, s[0])))
            report.multiplicity_checks.append(
                {"kind": kind, "d": d, "length": length, "value": value,
                 "cycles": count, "geometric": geo})
    return report


# ---------------------------------------------------------------------------
# independence numbers

def max_independent_set(conflict: list[int]) -> int:
    """Exact maximum independent set size; ``conflict[v]`` is a neighbour bitmask.

    Branch and bound, bounded by a greedy clique cover of the candidates.
    """
    n = len(conflict)
    best = 0

    def cover_bound(cand: int) -> int:
        cliques = 0
        while cand:
            v = (cand & -cand).bit_length() - 1
            clique = 1 << v
            common = conflict[v] & cand
            while common:
                w = (common & -common).bit_length() - 1
                clique |= 1 << w
                common &= conflict[w]
            cand &= ~clique
            cliques += 1
        return cliques

    def expand(cand: int, size: int):
        nonlocal best
        if not cand:
            best = max(best, size)
            return
        if size + cover_bound(cand) <= best:
            return
        # branch on the candidate with most conflicts inside cand
        v = max((u for u in range(n) if cand >> u & 1),
                key=lambda u: bin(conflict[u] & cand).count("1"))
        expand(cand & ~conflict[v] & ~(1 << v), size + 1)
        expand(cand & ~(1 << v), size)

    expand((1 << n) - 1, 0)
    return best


def _conflicts(lap_or_nb, strong: bool) -> list[int]:
    nb = lap_or_nb
    masks = [0] * nb.size
    by_input: dict[int, list[int]] = {}
    for e in nb.vertices:
        by_input.setdefault(e.inp, []).append(e.index)
    for group in by_input.values():
        for i in group:
            for j in group:
                if i != j:
                    masks[i] |= 1 << j
    if strong:
        for i, j in nb.arcs():
            masks[i] |= 1 << j
            masks[j] |= 1 << i
    return masks


@dataclass
class IndependenceReport:
    alpha_out: int
    alpha_s_out: int


def independence_numbers(g: SimpleGraph) -> IndependenceReport:
    nb = build_nb(g)
    if nb.size > INDEPENDENCE_CAP:
        raise CapabilityError(f"independence numbers are capped at 2M <= {INDEPENDENCE_CAP}")
    return IndependenceReport(max_independent_set(_conflicts(nb, False)),
                              max_independent_set(_conflicts(nb, True)))


@dataclass
class InertiaReport:
    a: float
    alpha_out: int
    alpha_s_out: int
    thresholds: dict[str, float]
    counts: dict[str, int]
    gram_L_ok: bool
    gram_T_ok: bool

    @property
    def inequalities(self) -> dict[str, bool]:
        s, o = self.alpha_s_out, self.alpha_out
        return {
            "s_out<=#{s(L)<=sqrt(d/(d-1))}": s <= self.counts["L_low"],
            "s_out<=#{s(L)>=sqrt(D/(D-1))}": s <= self.counts["L_high"],
            "s_out<=#{s(aI-L)<=...delta}": s <= self.counts["aL_low"],
            "s_out<=#{s(aI-L)>=...Delta}": s <= self.counts["aL_high"],
            "out<=#{s(I-L)<=sqrt(1/(d-1))}": o <= self.counts["T_low"],
            "out<=#{s(I-L)>=sqrt(1/(D-1))}": o <= self.counts["T_high"],
        }

    @property
    def all_hold(self) -> bool:
        return all(self.inequalities.values()) and self.gram_L_ok and self.gram_T_ok


def gram_predictions(lap: NBLaplacian) -> tuple[RationalMatrix, RationalMatrix]:
    """Entrywise predictions for ``L^T L`` and ``(D^-1 A)^T D^-1 A``."""
    n = lap.size
    deg = lap.graph.degrees
    verts = lap.nb.vertices
    GL = [[Fraction(0)] * n for _ in range(n)]
    GT = [[Fraction(0)] * n for _ in range(n)]
    for i, e in enumerate(verts):
        dv = deg[e.inp]
        GL[i][i] = Fraction(dv, dv - 1)
        GT[i][i] = Fraction(1, dv - 1)
        for j, f in enumerate(verts):
            if i != j and f.inp == e.inp:
                GL[i][j] = GT[i][j] = Fraction(dv - 2, (dv - 1) ** 2)
    for i, j in lap.nb.arcs():  # [y,v] -> [v,w]
        dv = deg[verts[i].out]
        GL[i][j] = GL[j][i] = Fraction(-1, dv - 1)
    return RationalMatrix.from_fractions(GL), RationalMatrix.from_fractions(GT)


def gram_formulas_hold(lap: NBLaplacian) -> tuple[bool, bool]:
    GL, GT = gram_predictions(lap)
    return lap.L.T @ lap.L == GL, lap.T.T @ lap.T == GT


def inertia_bounds_check(g: SimpleGraph, a: float = 0.0, tol: float = DEFAULT_TOL,
                         lap: NBLaplacian | None = None,
                         indep: IndependenceReport | None = None) -> InertiaReport:
    lap = build_laplacian(g) if lap is None else lap
    indep = independence_numbers(g) if indep is None else indep
    d, D = g.min_degree, g.max_degree
    th = {
        "L_low": sqrt(d / (d - 1)),
        "L_high": sqrt(D / (D - 1)),
        "aL_low": sqrt((a - 1) ** 2 + 1 / (d - 1)),
        "aL_high": sqrt((a - 1) ** 2 + 1 / (D - 1)),
        "T_low": sqrt(1 / (d - 1)),
        "T_high": sqrt(1 / (D - 1)),
    }
    sL = singular_values(lap.L)
    sA = singular_values(lap.L.shift(Fraction(a).limit_denominator(10**12)))
    sT = singular_values(lap.T)
    counts = {
        "L_low": sL.count_at_most(th["L_low"], tol),
        "L_high": sL.count_at_least(th["L_high"], tol),
        "aL_low": sA.count_at_most(th["aL_low"], tol),
        "aL_high": sA.count_at_least(th["aL_high"], tol),
        "T_low": sT.count_at_most(th["T_low"], tol),
        "T_high": sT.count_at_least(th["T_high"], tol),
    }
    gl, gt = gram_formulas_hold(lap)
    return InertiaReport(a, indep.alpha_out, indep.alpha_s_out, th, counts, gl, gt)


def s2_identity_minus_L(lap: NBLaplacian) -> float:
    """``s_2(Id - L)``, which equals ``1/(Delta - 1)``."""
    return singular_values(lap.T)[2]


# ---------------------------------------------------------------------------
# CSV summary

CSV_FIELDS = ["graph6", "n", "M", "delta", "Delta", "max_k", "epsilon", "E",
              "lower_bound", "upper_bound_thm", "corollary_bound", "conjecture_bound",
              "alpha_out", "alpha_s_out", "gap_ok", "conjecture_holds", "inertia_ok"]


def _fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, float):
        return f"{x:.12g}"
    return str(x)


def summary_row(g: SimpleGraph, tol: float = DEFAULT_TOL) -> dict:
    lap = build_laplacian(g)
    gap = gap_report(g, tol, lap=lap)
    row = {
        "graph6": g.to_graph6(), "n": g.n, "M": g.m, "delta": g.min_degree, "Delta": g.max_degree,
        "max_k": gap.max_k, "epsilon": gap.epsilon, "E": gap.E, "lower_bound": gap.lower_bound,
        "upper_bound_thm": gap.upper_bound_thm, "corollary_bound": gap.corollary_bound,
        "conjecture_bound": gap.conjecture_bound, "gap_ok": gap.all_ok,
        "conjecture_holds": gap.conjecture_holds,
        "alpha_out": None, "alpha_s_out": None, "inertia_ok": None,
    }
    if lap.size <= INDEPENDENCE_CAP:
        inert = inertia_bounds_check(g, 1.0, tol, lap=lap)
        row.update(alpha_out=inert.alpha_out, alpha_s_out=inert.alpha_s_out, inertia_ok=inert.all_hold)
    return row


def summary_csv(graphs, tol: float = DEFAULT_TOL) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, CSV_FIELDS, lineterminator="\n")
    w.writeheader()
    for g in graphs:
        w.writerow({k: _fmt(v) for k, v in summary_row(g, tol).items()})
    return buf.getvalue()
