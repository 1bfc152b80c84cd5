"""The non-backtracking Laplacian ``L = Id - D^-1 A`` and its eigenpairs.

Exact statements (transpose symmetry under reversal, row sums, eigenvalue
membership of rationals, multiplicity of 0) go through :class:`RationalMatrix`
and :class:`CharPoly`. Statements about eigenvectors are checked on LAPACK
eigenvectors through residuals measured against a tolerance.

Symmetric / antisymmetric classification is done per eigenspace: the
symmetric part of an eigenspace is the kernel of ``[L - lam Id; P - Id]``,
which does not depend on the basis LAPACK happens to return.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, reduce
from math import gcd

import numpy as np

from .errors import PreconditionError
from .graph_core import SimpleGraph, line_graph
from .linalg import (CLUSTER_RADIUS, DEFAULT_TOL, CharPoly, RationalMatrix, Spectrum,
                     char_poly, cluster_indices, eigenpairs, eigenvalues, null_space,
                     singular_values)
from .nb_construct import NBGraph, build_nb, reversal_matrix, reversal_permutation

SYMMETRY_RTOL = 1e-6


@dataclass(frozen=True)
class NBLaplacian:
    graph: SimpleGraph
    nb: NBGraph
    D: RationalMatrix  # diag(deg(out(e_i)) - 1)
    A: RationalMatrix  # = B
    T: RationalMatrix  # D^-1 A, the non-backtracking transition matrix
    L: RationalMatrix  # Id - T

    @property
    def size(self) -> int:
        return self.L.n

    @property
    def m(self) -> int:
        return self.L.n // 2

    @cached_property
    def P(self) -> np.ndarray:
        return reversal_matrix(self.m)

    @cached_property
    def charpoly(self) -> CharPoly:
        return char_poly(self.L)

    @cached_property
    def transition_charpoly(self) -> CharPoly:
        return char_poly(self.T)

    @cached_property
    def L_float(self) -> np.ndarray:
        return self.L.to_float()

    @cached_property
    def T_float(self) -> np.ndarray:
        return self.T.to_float()

    @cached_property
    def spectrum(self) -> Spectrum:
        return eigenvalues(self.L, operator="nb_laplacian")

    def is_eigenvalue(self, value) -> bool:
        """Exact membership of a rational value in the spectrum."""
        return self.charpoly(Fraction(value)) == 0

    def out_weights(self) -> list[Fraction]:
        """``1 / (deg(out(e_i)) - 1)`` for each oriented edge."""
        return [1 / self.D[i, i] for i in range(self.size)]


def build_laplacian(g: SimpleGraph) -> NBLaplacian:
    if g.m == 0 or g.min_degree < 2:
        raise PreconditionError("the non-backtracking Laplacian needs min degree >= 2")
    nb = build_nb(g)
    dm1 = [g.degrees[e.out] - 1 for e in nb.vertices]
    den = reduce(lambda a, b: a // gcd(a, b) * b, dm1, 1)
    scale = np.array([den // d for d in dm1], dtype=object)
    A = RationalMatrix(nb.B.astype(object))
    T = RationalMatrix(nb.B.astype(object) * scale[:, None], den)
    D = RationalMatrix.diagonal(dm1)
    L = RationalMatrix.identity(nb.size) - T
    return NBLaplacian(g, nb, D, A, T, L)


# ---------------------------------------------------------------------------
# exact structural identities

@dataclass(frozen=True)
class IdentityReport:
    transpose_symmetry: bool   # L^T == P L P
    lp_symmetric: bool         # L P symmetric
    row_sums_one: bool         # rows of D^-1 A sum to 1
    off_diagonal_formula: bool # L_ij = -B_ij / (deg(out(e_i)) - 1), i != j

    @property
    def all_hold(self) -> bool:
        return self.transpose_symmetry and self.lp_symmetric and self.row_sums_one and self.off_diagonal_formula


def exact_identities(lap: NBLaplacian) -> IdentityReport:
    rev = reversal_permutation(lap.m)
    PLP = lap.L.permute(rev)
    LP = RationalMatrix(lap.L.num[:, rev], lap.L.den)
    weights = lap.out_weights()
    off = all(
        lap.L[i, j] == -lap.nb.B[i, j] * weights[i]
        for i in range(lap.size) for j in range(lap.size) if i != j
    )
    return IdentityReport(
        lap.L.T == PLP,
        LP.is_symmetric(),
        all(s == 1 for s in lap.T.row_sums()),
        off,
    )


def zero_multiplicity_check(g: SimpleGraph) -> tuple[int, int]:
    """``(algebraic multiplicity of 0 in L, number of weak NB components)``."""
    lap = build_laplacian(g)
    return lap.charpoly.zero_multiplicity(), len(lap.nb.weak_components())


# ---------------------------------------------------------------------------
# eigenpairs

@dataclass(frozen=True)
class EigenPair:
    value: complex
    vector: np.ndarray
    residual: float  # ||L f - value f|| / ||f||


def laplacian_eigenpairs(lap: NBLaplacian) -> list[EigenPair]:
    w, v = eigenpairs(lap.L_float)
    out = []
    for lam, f in zip(w, v.T):
        r = np.linalg.norm(lap.L_float @ f - lam * f) / np.linalg.norm(f)
        out.append(EigenPair(complex(lam), f, float(r)))
    return out


def p_product(x: np.ndarray, y: np.ndarray) -> complex:
    """``(x, y)_P = conj(x)^T P y``."""
    m = len(x) // 2
    py = np.concatenate([y[m:], y[:m]])
    return complex(np.vdot(x, py))


def eigenpair_sum_zero(pair: EigenPair, tol: float = DEFAULT_TOL) -> float:
    """``|sum f| / ||f||_1``; eigenfunctions of non-zero eigenvalues sum to 0."""
    if abs(pair.value) <= tol:
        raise PreconditionError("sum-zero property applies to non-zero eigenvalues only")
    return float(abs(pair.vector.sum()) / np.sum(np.abs(pair.vector)))


@dataclass(frozen=True)
class EigenfunctionReport:
    value: complex
    sum_over_edges: complex
    symmetry_class: str  # "symmetric" | "antisymmetric" | "neither"
    p_selfproduct: complex
    flow_balance_residual: float | None
    real_value: bool | None


def flow_balance_residual(lap: NBLaplacian, f: np.ndarray) -> float:
    """Relative mismatch between the weighted outflow ``(T f)[v,w]`` and the
    weighted inflow ``(T^T f)[v,w]`` over all oriented edges."""
    T = lap.T_float
    return float(np.linalg.norm(T @ f - T.T @ f) / np.linalg.norm(f))


def classify_symmetry(pair: EigenPair, lap: NBLaplacian, rtol: float = SYMMETRY_RTOL,
                      real_tol: float = DEFAULT_TOL) -> EigenfunctionReport:
    f = pair.vector
    m = len(f) // 2
    pf = np.concatenate([f[m:], f[:m]])
    nf = np.linalg.norm(f)
    if np.linalg.norm(pf - f) <= rtol * nf:
        cls = "symmetric"
    elif np.linalg.norm(pf + f) <= rtol * nf:
        cls = "antisymmetric"
    else:
        cls = "neither"
    flow = real = None
    if cls != "neither":
        flow = flow_balance_residual(lap, f)
        real = abs(pair.value.imag) <= real_tol
    return EigenfunctionReport(pair.value, complex(f.sum()), cls, p_product(f, f), flow, real)


@dataclass
class Eigenspace:
    value: complex
    algebraic: int
    basis: np.ndarray
    symmetric: np.ndarray
    antisymmetric: np.ndarray

    @property
    def geometric(self) -> int:
        return self.basis.shape[1]


def eigenspaces(lap: NBLaplacian, rtol: float = 1e-7) -> list[Eigenspace]:
    """Eigenspaces per eigenvalue cluster, with their symmetric and
    antisymmetric subspaces (basis independent)."""
    L = lap.L_float
    n = lap.size
    I = np.eye(n)
    P = lap.P.astype(float)
    out = []
    for value, mult in lap.spectrum.clusters(CLUSTER_RADIUS):
        if abs(value.imag) <= 1e-10:
            value = complex(value.real, 0.0)
        shifted = L - value * I
        basis = null_space(shifted, rtol)
        sym = null_space(np.vstack([shifted, P - I]), rtol)
        anti = null_space(np.vstack([shifted, P + I]), rtol)
        out.append(Eigenspace(value, mult, basis, sym, anti))
    return out


@dataclass
class SymmetricTransfer:
    value: complex
    lp_residual: float         # ||L P f - lam f|| / ||f||
    line_residual: float       # ||Ltilde ftilde - lam ftilde|| / ||ftilde||
    line_spectrum_distance: float
    flow_residual: float


@dataclass
class SymmetricLPReport:
    lp_symmetric: bool
    transfers: list[SymmetricTransfer] = field(default_factory=list)

    def max_residual(self) -> float:
        return max((max(t.lp_residual, t.line_residual) for t in self.transfers), default=0.0)

    def max_spectrum_distance(self) -> float:
        return max((t.line_spectrum_distance for t in self.transfers), default=0.0)


def line_graph_rw_laplacian(g: SimpleGraph) -> np.ndarray:
    lg = line_graph(g)
    a = lg.adjacency().astype(float)
    return np.eye(lg.n) - a / a.sum(axis=1)[:, None]


def line_graph_rw_spectrum(g: SimpleGraph) -> np.ndarray:
    """Eigenvalues of ``Id - D^-1 A`` of the line graph, via the similar
    symmetric matrix ``Id - D^-1/2 A D^-1/2``."""
    lg = line_graph(g)
    a = lg.adjacency().astype(float)
    s = 1.0 / np.sqrt(a.sum(axis=1))
    return np.linalg.eigvalsh(np.eye(lg.n) - s[:, None] * a * s[None, :])


def symmetric_LP_equivalence(g: SimpleGraph, spaces: list[Eigenspace] | None = None) -> SymmetricLPReport:
    lap = build_laplacian(g)
    rev = reversal_permutation(lap.m)
    LP = RationalMatrix(lap.L.num[:, rev], lap.L.den)
    report = SymmetricLPReport(LP.is_symmetric())
    spaces = eigenspaces(lap) if spaces is None else spaces
    LPf = LP.to_float()
    Lt = line_graph_rw_laplacian(g)
    line_spec = line_graph_rw_spectrum(g)
    m = lap.m
    for sp in spaces:
        for f in sp.symmetric.T:
            lam = sp.value
            ft = f[:m]
            report.transfers.append(SymmetricTransfer(
                lam,
                float(np.linalg.norm(LPf @ f - lam * f) / np.linalg.norm(f)),
                float(np.linalg.norm(Lt @ ft - lam * ft) / np.linalg.norm(ft)),
                float(np.min(np.abs(line_spec - lam))),
                flow_balance_residual(lap, f),
            ))
    return report


def nk_determination_check(pair: EigenPair, lap: NBLaplacian, k: int, sources=None) -> float:
    """Rebuild ``f(e)`` from the values ``k`` non-backtracking steps ahead.

    ``f(e) = (1 - lam)^-k * sum over NB walks e -> ... -> e' of length k of
    prod 1/(deg - 1) * f(e')``; walks are enumerated explicitly. Returns the
    max residual relative to ``max |f|``.
    """
    lam = pair.value
    if abs(1 - lam) <= DEFAULT_TOL:
        raise PreconditionError("1 is never an eigenvalue; got lambda ~ 1")
    f = pair.vector
    succ = lap.nb.successors
    w = [float(x) for x in lap.out_weights()]
    sources = range(lap.size) if sources is None else sources
    worst = 0.0
    for e in sources:
        frontier = {e: 1.0}
        for _ in range(k):
            nxt: dict[int, float] = {}
            for x, c in frontier.items():
                for y in succ[x]:
                    nxt[y] = nxt.get(y, 0.0) + c * w[x]
            frontier = nxt
        total = sum(c * f[y] for y, c in frontier.items())
        worst = max(worst, abs(f[e] - total / (1 - lam) ** k))
    return float(worst / np.max(np.abs(f)))


@dataclass
class POrthogonalityReport:
    max_cross: float         # max |(f, g)_P| / (||f|| ||g||) over pairs with conj(lam) != mu
    max_self_nonreal: float  # max |(f, f)_P| / ||f||^2 over non-real lam
    checked_pairs: int
    flagged_pairs: list[tuple[int, int]]


def p_orthogonality(pairs: list[EigenPair], radius: float = CLUSTER_RADIUS) -> POrthogonalityReport:
    """Pairs with ``conj(lam)`` within ``radius`` of ``mu`` fall outside the
    lemma's hypothesis and are only flagged."""
    max_cross = max_self = 0.0
    flagged = []
    checked = 0
    for i, a in enumerate(pairs):
        na = np.linalg.norm(a.vector)
        if abs(a.value.imag) > radius:
            max_self = max(max_self, abs(p_product(a.vector, a.vector)) / na**2)
        for j in range(i + 1, len(pairs)):
            b = pairs[j]
            if abs(np.conj(a.value) - b.value) <= radius:
                flagged.append((i, j))
                continue
            checked += 1
            val = abs(p_product(a.vector, b.vector)) / (na * np.linalg.norm(b.vector))
            max_cross = max(max_cross, val)
    return POrthogonalityReport(max_cross, max_self, checked, flagged)


# ---------------------------------------------------------------------------
# modulus envelopes

@dataclass
class EnvelopeReport:
    a: float
    s2: float
    s_max: float
    min_distance: float  # min |lam - a| over non-zero eigenvalues
    max_distance: float
    lower_holds: bool
    upper_holds: bool
    # smallest singular value of (a Id - L) restricted to the orthogonal
    # complement of the constants; this is the bound the Rayleigh argument
    # actually gives, and it coincides with s_2 only when a^2 is the bottom
    # of the Gram spectrum (e.g. a = 0, a = 1)
    restricted_lower: float = 0.0
    restricted_lower_holds: bool = True

    @property
    def holds(self) -> bool:
        return self.lower_holds and self.upper_holds


def modulus_envelope(g: SimpleGraph, a: float = 0.0, tol: float = DEFAULT_TOL,
                     lap: NBLaplacian | None = None) -> EnvelopeReport:
    """``s_2(a Id - L) <= |lam - a| <= s_2M(a Id - L)`` for every non-zero
    eigenvalue ``lam``; requires a connected NB graph (0 is then simple)."""
    lap = build_laplacian(g) if lap is None else lap
    if len(lap.nb.weak_components()) != 1:
        raise PreconditionError("modulus envelope needs a connected non-backtracking graph")
    sv = singular_values(lap.L.shift(Fraction(a).limit_denominator(10**12)))
    vals = lap.spectrum.values
    zero = int(np.argmin(np.abs(vals)))
    rest = np.delete(vals, zero)
    dist = np.abs(rest - a)
    s2, smax = sv[2], sv[len(sv)]
    restricted = restricted_singular_min(lap, a)
    return EnvelopeReport(a, s2, smax, float(dist.min()), float(dist.max()),
                          bool(dist.min() >= s2 - tol), bool(dist.max() <= smax + tol),
                          restricted, bool(dist.min() >= restricted - tol))


def restricted_singular_min(lap: NBLaplacian, a: float) -> float:
    """``min ||(a Id - L) f|| / ||f||`` over ``f`` orthogonal to the constants."""
    n = lap.size
    q, _ = np.linalg.qr(np.hstack([np.ones((n, 1)), np.eye(n)[:, : n - 1]]))
    X = a * np.eye(n) - lap.L_float
    return float(np.linalg.svd(X @ q[:, 1:], compute_uv=False).min())


def regular_B_spectrum_match(g: SimpleGraph) -> bool:
    """For ``d``-regular ``g``: charpoly(L) == charpoly(Id - B/(d-1)) exactly."""
    d = g.max_degree
    if g.min_degree != d:
        raise PreconditionError("graph is not regular")
    lap = build_laplacian(g)
    other = RationalMatrix.identity(lap.size) - lap.A.scale(Fraction(1, d - 1))
    return char_poly(other).coeffs == lap.charpoly.coeffs
