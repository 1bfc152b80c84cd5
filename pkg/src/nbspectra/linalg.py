"""Exact rational matrices, exact characteristic polynomials, float spectra.

Two tracks:

* exact: :class:`RationalMatrix` and :class:`CharPoly` over :class:`Fraction`.
  Cospectrality, rational eigenvalue membership and root multiplicities are
  decided here, never from floats.
* float: :func:`eigenvalues` / :func:`eigenpairs` (LAPACK ``geev``) and
  :func:`singular_values` (LAPACK ``gesdd``) for geometry: gaps, moduli,
  eigenvectors.

The characteristic polynomial is computed multi-modularly: the matrix is
scaled to integers, reduced to Hessenberg form modulo enough 31-bit primes to
cover a Hadamard-type coefficient bound, and lifted by CRT.
"""

from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce
from typing import Iterable, Sequence

import numpy as np

from .errors import NumericError, PreconditionError

DEFAULT_TOL = 1e-8
CLUSTER_RADIUS = 1e-6


# ---------------------------------------------------------------------------
# exact matrices

def _lcm(a: int, b: int) -> int:
    return a // math.gcd(a, b) * b


class RationalMatrix:
    """Square matrix of rationals stored as ``num / den``.

    ``num`` is an object array of Python ints and ``den`` a positive int with
    ``gcd(den, all entries) == 1``. Instances are treated as immutable.
    """

    __slots__ = ("num", "den")

    def __init__(self, num, den: int = 1):
        num = np.array(num, dtype=object)
        if num.ndim != 2 or num.shape[0] != num.shape[1]:
            raise PreconditionError(f"square matrix required, got shape {num.shape}")
        if den == 0:
            raise ZeroDivisionError("zero denominator")
        if den < 0:
            num, den = -num, -den
        g = reduce(math.gcd, (int(x) for x in num.flat), den)
        if g > 1:
            num = num // g
            den //= g
        num.setflags(write=False)
        self.num = num
        self.den = int(den)

    @classmethod
    def from_fractions(cls, rows: Sequence[Sequence]) -> "RationalMatrix":
        fr = [[Fraction(x) for x in row] for row in rows]
        den = reduce(_lcm, (x.denominator for row in fr for x in row), 1)
        num = [[x.numerator * (den // x.denominator) for x in row] for row in fr]
        return cls(np.array(num, dtype=object).reshape(len(fr), len(fr)), den)

    @classmethod
    def identity(cls, n: int) -> "RationalMatrix":
        return cls(np.eye(n, dtype=np.int64).astype(object))

    @classmethod
    def diagonal(cls, values: Sequence) -> "RationalMatrix":
        n = len(values)
        rows = [[Fraction(0)] * n for _ in range(n)]
        for i, v in enumerate(values):
            rows[i][i] = Fraction(v)
        return cls.from_fractions(rows)

    @property
    def n(self) -> int:
        return self.num.shape[0]

    @property
    def shape(self) -> tuple[int, int]:
        return self.num.shape

    def __getitem__(self, ij) -> Fraction:
        i, j = ij
        return Fraction(int(self.num[i, j]), self.den)

    def entries(self) -> list[list[Fraction]]:
        return [[Fraction(int(x), self.den) for x in row] for row in self.num]

    def _aligned(self, other: "RationalMatrix"):
        den = _lcm(self.den, other.den)
        return self.num * (den // self.den), other.num * (den // other.den), den

    def __add__(self, other):
        a, b, den = self._aligned(other)
        return RationalMatrix(a + b, den)

    def __sub__(self, other):
        a, b, den = self._aligned(other)
        return RationalMatrix(a - b, den)

    def __neg__(self):
        return RationalMatrix(-self.num, self.den)

    def __matmul__(self, other):
        return RationalMatrix(self.num.dot(other.num), self.den * other.den)

    def scale(self, c) -> "RationalMatrix":
        c = Fraction(c)
        return RationalMatrix(self.num * c.numerator, self.den * c.denominator)

    def shift(self, a) -> "RationalMatrix":
        """``a * Id - self``."""
        return RationalMatrix.identity(self.n).scale(a) - self

    @property
    def T(self) -> "RationalMatrix":
        return RationalMatrix(self.num.T.copy(), self.den)

    def permute(self, perm: Sequence[int]) -> "RationalMatrix":
        """``Q self Q^T`` for the permutation matrix with ``Q e_j = e_perm[j]``."""
        inv = np.argsort(perm)
        return RationalMatrix(self.num[np.ix_(inv, inv)], self.den)

    def row_sums(self) -> list[Fraction]:
        return [Fraction(int(sum(row)), self.den) for row in self.num]

    def is_symmetric(self) -> bool:
        return bool(np.all(self.num == self.num.T))

    def to_float(self) -> np.ndarray:
        return self.num.astype(float) / self.den

    def fingerprint(self) -> str:
        h = hashlib.sha1(repr((self.den, self.num.tolist())).encode()).hexdigest()
        return h[:12]

    def __eq__(self, other):
        if not isinstance(other, RationalMatrix):
            return NotImplemented
        return self.den == other.den and self.shape == other.shape and bool(np.all(self.num == other.num))

    def __hash__(self):
        return hash((self.den, tuple(self.num.flat)))

    def __repr__(self):
        return f"RationalMatrix(n={self.n}, den={self.den})"


def as_rational(m) -> RationalMatrix:
    if isinstance(m, RationalMatrix):
        return m
    arr = np.asarray(m, dtype=object)
    if all(isinstance(x, (int, np.integer)) for x in arr.flat):
        return RationalMatrix(np.vectorize(int, otypes=[object])(arr))
    return RationalMatrix.from_fractions(arr.tolist())


# ---------------------------------------------------------------------------
# polynomials over Q (coefficients highest degree first)

def _trim(c: list[Fraction]) -> list[Fraction]:
    i = 0
    while i < len(c) - 1 and c[i] == 0:
        i += 1
    return c[i:]


def poly_divmod(a: Sequence, b: Sequence) -> tuple[list[Fraction], list[Fraction]]:
    a = _trim([Fraction(x) for x in a])
    b = _trim([Fraction(x) for x in b])
    if b == [0]:
        raise ZeroDivisionError("polynomial division by zero")
    if len(a) < len(b):
        return [Fraction(0)], a
    q = [Fraction(0)] * (len(a) - len(b) + 1)
    r = list(a)
    for i in range(len(q)):
        c = r[i] / b[0]
        q[i] = c
        if c:
            for j, bj in enumerate(b):
                r[i + j] -= c * bj
    rem = _trim(r[len(q):]) if len(b) > 1 else [Fraction(0)]
    return q, rem


def poly_mul(a: Sequence, b: Sequence) -> list[Fraction]:
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def poly_gcd(a: Sequence, b: Sequence) -> list[Fraction]:
    """Monic gcd."""
    a = _trim([Fraction(x) for x in a])
    b = _trim([Fraction(x) for x in b])
    while b != [0]:
        a, b = b, poly_divmod(a, b)[1]
    return [x / a[0] for x in a] if a[0] else a


def poly_derivative(a: Sequence) -> list[Fraction]:
    d = len(a) - 1
    return _trim([Fraction(a[i]) * (d - i) for i in range(d)]) if d > 0 else [Fraction(0)]


def squarefree_decomposition(a: Sequence) -> list[tuple[list[Fraction], int]]:
    """Yun's algorithm: monic ``a = prod s_j^j`` with ``s_j`` squarefree, coprime."""
    a = _trim([Fraction(x) for x in a])
    a = [x / a[0] for x in a]
    out = []
    b = poly_derivative(a)
    c = poly_gcd(a, b)
    w = poly_divmod(a, c)[0]
    y = poly_divmod(b, c)[0]
    z = _poly_sub(y, poly_derivative(w))
    j = 1
    while len(w) > 1:
        s = poly_gcd(w, z)
        if len(s) > 1:
            out.append((s, j))
        w = poly_divmod(w, s)[0]
        y = poly_divmod(z, s)[0]
        z = _poly_sub(y, poly_derivative(w))
        j += 1
    return out


def _poly_sub(a: Sequence, b: Sequence) -> list[Fraction]:
    n = max(len(a), len(b))
    a = [Fraction(0)] * (n - len(a)) + list(a)
    b = [Fraction(0)] * (n - len(b)) + list(b)
    return _trim([x - y for x, y in zip(a, b)])


@dataclass(frozen=True)
class CharPoly:
    """Monic ``det(x Id - m)``; ``coeffs[0] == 1`` is the ``x**n`` coefficient."""

    coeffs: tuple[Fraction, ...]

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __call__(self, x) -> Fraction:
        x = Fraction(x)
        acc = Fraction(0)
        for c in self.coeffs:
            acc = acc * x + c
        return acc

    def evaluate_complex(self, z: complex) -> complex:
        acc = 0j
        for c in self.coeffs:
            acc = acc * z + float(c)
        return acc

    def root_multiplicity(self, value) -> int:
        """Exact multiplicity of the rational root ``value`` (0 if not a root)."""
        value = Fraction(value)
        c = list(self.coeffs)
        mult = 0
        while len(c) > 1:
            q, acc = [], Fraction(0)
            for x in c:
                acc = acc * value + x
                q.append(acc)
            if acc != 0:
                break
            mult += 1
            c = q[:-1]
        return mult

    def zero_multiplicity(self) -> int:
        k = 0
        for c in reversed(self.coeffs):
            if c != 0:
                break
            k += 1
        return k

    def divisible_by(self, divisor: Sequence) -> bool:
        return poly_divmod(self.coeffs, divisor)[1] == [0]

    def squarefree_parts(self) -> list[tuple[list[Fraction], int]]:
        zero = self.zero_multiplicity()
        core = list(self.coeffs[: len(self.coeffs) - zero]) if zero else list(self.coeffs)
        parts = squarefree_decomposition(core) if len(core) > 1 else []
        if zero:
            parts.append(([Fraction(1), Fraction(0)], zero))
        return parts

    def integer_key(self) -> tuple[int, tuple[int, ...]]:
        """``(clearing factor, primitive integer coefficients)``; equal keys iff
        equal polynomials."""
        den = reduce(_lcm, (c.denominator for c in self.coeffs), 1)
        ints = [int(c * den) for c in self.coeffs]
        return den, tuple(ints)

    def key_bytes(self) -> bytes:
        den, ints = self.integer_key()
        return (str(den) + ":" + ",".join(map(str, ints))).encode()

    def __str__(self):
        terms = []
        for i, c in enumerate(self.coeffs):
            if c == 0:
                continue
            p = self.degree - i
            mono = "" if p == 0 else ("x" if p == 1 else f"x^{p}")
            coef = str(c)
            if mono and c == 1:
                coef = ""
            elif mono and c == -1:
                coef = "-"
            terms.append(f"{coef}{mono}" if mono else coef)
        return " + ".join(terms).replace("+ -", "- ") or "0"


# ---------------------------------------------------------------------------
# multi-modular characteristic polynomial

def _primes_below(limit: int, count: int) -> list[int]:
    out = []
    cand = limit - 1 if limit % 2 == 0 else limit - 2
    while len(out) < count:
        if _is_prime(cand):
            out.append(cand)
        cand -= 2
    return out


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in (2, 3, 5, 7, 11, 13, 17):
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


_PRIMES: list[int] = []


def _prime_pool(count: int) -> list[int]:
    if len(_PRIMES) < count:
        _PRIMES[:] = _primes_below(2**31, max(count, 2 * len(_PRIMES), 16))
    return _PRIMES[:count]


def _charpoly_mod_p(a: np.ndarray, p: int) -> np.ndarray:
    """Charpoly of an int64 matrix (entries in [0, p)) modulo prime ``p``.

    Hessenberg reduction by similarity, then the standard recurrence.
    Returns coefficients highest degree first.
    """
    h = a.copy()
    n = h.shape[0]
    for m in range(1, n - 1):
        col = h[m:, m - 1]
        nz = np.nonzero(col)[0]
        if nz.size == 0:
            continue
        i = m + int(nz[0])
        if i != m:
            h[[i, m], :] = h[[m, i], :]
            h[:, [i, m]] = h[:, [m, i]]
        inv = pow(int(h[m, m - 1]), p - 2, p)
        u = h[m + 1:, m - 1] * inv % p
        if np.any(u):
            # similarity by L = Id + sum_r u_r e_r e_m^T; the elementary factors commute
            h[m + 1:, :] = (h[m + 1:, :] - np.outer(u, h[m, :]) % p) % p
            h[:, m] = (h[:, m] + np.sum(h[:, m + 1:] * u % p, axis=1)) % p
    # p_k: charpoly of leading k x k block, stored as coefficient arrays (low -> high)
    polys = [np.array([1], dtype=np.int64)]
    for k in range(1, n + 1):
        prev = polys[-1]
        nxt = np.zeros(k + 1, dtype=np.int64)
        nxt[1:] = prev
        nxt[:k] = (nxt[:k] - h[k - 1, k - 1] * prev) % p
        t = 1
        for i in range(k - 1, 0, -1):
            t = t * int(h[i, i - 1]) % p
            if t == 0:
                break
            c = t * int(h[i - 1, k - 1]) % p
            if c:
                q = polys[i - 1]
                nxt[: q.size] = (nxt[: q.size] - c * q) % p
        polys.append(nxt % p)
    return polys[-1][::-1]


def _coefficient_bound_bits(a: np.ndarray) -> int:
    """log2 of prod(1 + ||row||_2): bounds every charpoly coefficient."""
    norms = np.sqrt(np.sum(a.astype(float) ** 2, axis=1))
    return int(math.ceil(np.sum(np.log2(1.0 + norms)))) + 2


def integer_char_poly(a) -> list[int]:
    """Exact charpoly of an integer matrix, highest degree first."""
    a = np.asarray(a, dtype=object)
    n = a.shape[0]
    if n == 0:
        return [1]
    bits = _coefficient_bound_bits(a)
    primes = _prime_pool(bits // 30 + 2)
    modulus, result = 1, [0] * (n + 1)
    for p in primes:
        am = np.array([[int(x) % p for x in row] for row in a], dtype=np.int64)
        cp = _charpoly_mod_p(am, p)
        if modulus == 1:
            result = [int(c) for c in cp]
        else:
            inv = pow(modulus % p, p - 2, p)
            result = [r + modulus * (((int(c) - r) * inv) % p) for r, c in zip(result, cp)]
        modulus *= p
        if modulus.bit_length() > bits + 1:
            break
    half = modulus // 2
    return [r - modulus if r > half else r for r in result]


def char_poly(m) -> CharPoly:
    """Exact characteristic polynomial ``det(x Id - m)``."""
    m = as_rational(m)
    ints = integer_char_poly(m.num)
    d = m.den
    return CharPoly(tuple(Fraction(c, d**k) for k, c in enumerate(ints)))


def spectra_equal_exact(p1: CharPoly, p2: CharPoly) -> bool:
    return p1.coeffs == p2.coeffs


def exact_rank(m) -> int:
    """Rank over Q by fraction-free (Bareiss) elimination of the numerators."""
    m = as_rational(m)
    a = [[int(x) for x in row] for row in m.num]
    rows, cols = len(a), len(a[0]) if a else 0
    rank, prev = 0, 1
    for c in range(cols):
        piv = next((r for r in range(rank, rows) if a[r][c]), None)
        if piv is None:
            continue
        a[rank], a[piv] = a[piv], a[rank]
        p = a[rank][c]
        for r in range(rank + 1, rows):
            f = a[r][c]
            a[r] = [(p * a[r][j] - f * a[rank][j]) // prev for j in range(cols)]
        prev = p
        rank += 1
    return rank


def geometric_multiplicity(m, value) -> int:
    """``n - rank(m - value Id)`` computed exactly; ``value`` rational."""
    m = as_rational(m)
    return m.n - exact_rank(m - RationalMatrix.identity(m.n).scale(Fraction(value)))


def cyclotomic_xk_minus_1(k: int) -> list[Fraction]:
    return [Fraction(1)] + [Fraction(0)] * (k - 1) + [Fraction(-1)]


# ---------------------------------------------------------------------------
# float spectra

@dataclass
class Spectrum:
    """Multiset of eigenvalues of one operator.

    ``values`` are LAPACK eigenvalues with each single-linkage cluster (radius
    ``cluster_radius``) replaced by its mean: the mean of a split multiple
    eigenvalue is far more accurate than its members.
    """

    values: np.ndarray
    operator: str = ""
    dim: int = 0
    tol: float = DEFAULT_TOL
    raw: np.ndarray | None = field(default=None, repr=False)

    def __len__(self):
        return len(self.values)

    def clusters(self, radius: float = CLUSTER_RADIUS) -> list[tuple[complex, int]]:
        return [(complex(np.mean(self.values[idx])), len(idx)) for idx in cluster_indices(self.values, radius)]

    def sorted(self) -> np.ndarray:
        v = self.values
        return v[np.lexsort((np.round(v.imag, 9), np.round(v.real, 9)))]

    def contains(self, value: complex, tol: float | None = None) -> bool:
        tol = self.tol if tol is None else tol
        return bool(np.min(np.abs(self.values - value)) <= tol) if len(self.values) else False

    def matching_error(self, other: Sequence[complex]) -> float:
        """Max distance under the optimal one-to-one matching."""
        from scipy.optimize import linear_sum_assignment

        other = np.asarray(other, dtype=complex)
        if other.shape != self.values.shape:
            return math.inf
        cost = np.abs(np.subtract.outer(self.values, other))
        r, c = linear_sum_assignment(cost)
        return float(cost[r, c].max()) if len(r) else 0.0

    def is_conjugation_closed(self, tol: float | None = None) -> bool:
        tol = self.tol if tol is None else tol
        return self.matching_error(np.conj(self.values)) <= tol

    def to_json(self, digits: int = 12) -> list[dict]:
        """Clusters in sorted order; parts below ``tol`` print as 0."""

        def snap(x: float) -> float:
            return 0.0 if abs(x) <= self.tol else float(f"{x:.{digits}g}")

        cl = sorted(self.clusters(), key=lambda c: (round(c[0].real, 9), round(c[0].imag, 9)))
        return [{"re": snap(z.real), "im": snap(z.imag), "mult": m} for z, m in cl]


def cluster_indices(values: np.ndarray, radius: float) -> list[np.ndarray]:
    """Single-linkage clusters of complex points."""
    n = len(values)
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    order = np.argsort(values.real)
    for a_pos, i in enumerate(order):
        for j in order[a_pos + 1:]:
            if values[j].real - values[i].real > radius:
                break
            if abs(values[j] - values[i]) <= radius:
                parent[find(i)] = find(j)
    groups: dict[int, list[int]] = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(i)
    return [np.array(sorted(g)) for g in sorted(groups.values(), key=min)]


def _polish(values: np.ndarray, radius: float) -> np.ndarray:
    out = values.copy()
    for idx in cluster_indices(values, radius):
        if len(idx) > 1:
            out[idx] = np.mean(values[idx])
    return out


def _as_float(m) -> np.ndarray:
    if isinstance(m, RationalMatrix):
        return m.to_float()
    return np.asarray(m, dtype=float)


def eigenvalues(m, tol: float = DEFAULT_TOL, operator: str = "") -> Spectrum:
    a = _as_float(m)
    try:
        raw = np.linalg.eigvals(a)
    except np.linalg.LinAlgError as exc:
        fp = m.fingerprint() if isinstance(m, RationalMatrix) else hashlib.sha1(a.tobytes()).hexdigest()[:12]
        raise NumericError(f"eigenvalue iteration did not converge (matrix {fp})") from exc
    return Spectrum(_polish(raw, CLUSTER_RADIUS), operator, a.shape[0], tol, raw)


def eigenpairs(m) -> tuple[np.ndarray, np.ndarray]:
    """Raw LAPACK eigenvalues and unit-norm right eigenvectors (columns)."""
    a = _as_float(m)
    try:
        w, v = np.linalg.eig(a)
    except np.linalg.LinAlgError as exc:
        raise NumericError("eigenvector computation did not converge") from exc
    return w, v


def null_space(a: np.ndarray, rtol: float = 1e-7) -> np.ndarray:
    """Orthonormal basis (columns) of the numerical kernel of ``a``."""
    a = np.asarray(a)
    if a.size == 0:
        return np.zeros((a.shape[1], 0))
    _, s, vh = np.linalg.svd(a)
    scale = max(1.0, s[0] if s.size else 1.0)
    rank = int(np.sum(s > rtol * scale))
    return vh[rank:].conj().T


@dataclass(frozen=True)
class SingularSpectrum:
    values: np.ndarray  # ascending

    def __getitem__(self, i: int) -> float:
        """1-based access matching ``s_1 <= s_2 <= ...``."""
        return float(self.values[i - 1])

    def __len__(self):
        return len(self.values)

    def count_at_most(self, threshold: float, tol: float = DEFAULT_TOL) -> int:
        return int(np.sum(self.values <= threshold + tol))

    def count_at_least(self, threshold: float, tol: float = DEFAULT_TOL) -> int:
        return int(np.sum(self.values >= threshold - tol))


def singular_values(m) -> SingularSpectrum:
    """Ascending singular values via a direct SVD of the floated matrix."""
    a = _as_float(m)
    s = np.linalg.svd(a, compute_uv=False)
    return SingularSpectrum(np.sort(s))


def singular_values_gram(m, tol: float = DEFAULT_TOL) -> SingularSpectrum:
    """Square roots of the eigenvalues of the exact Gram matrix ``m^T m``.

    Loses relative accuracy for singular values below ``sqrt(eps)``; kept as
    an independent cross-check of :func:`singular_values`.
    """
    m = as_rational(m)
    gram = (m.T @ m).to_float()
    w = np.linalg.eigvalsh(gram)
    if w.size and w.min() < -tol:
        raise NumericError(f"Gram matrix has eigenvalue {w.min():.3e} < -tol")
    return SingularSpectrum(np.sqrt(np.clip(np.sort(w), 0.0, None)))


# ---------------------------------------------------------------------------
# exchange formats

def write_matrix_market(m, path=None) -> str:
    """Coordinate Matrix Market text; integer field for integer matrices,
    otherwise real with 17 significant digits."""
    m = as_rational(m)
    n = m.n
    field_ = "integer" if m.den == 1 else "real"
    nz = [(i, j, m.num[i, j]) for i in range(n) for j in range(n) if m.num[i, j] != 0]
    lines = [f"%%MatrixMarket matrix coordinate {field_} general", f"{n} {n} {len(nz)}"]
    for i, j, x in nz:
        val = str(int(x)) if m.den == 1 else repr(int(x) / m.den)
        lines.append(f"{i + 1} {j + 1} {val}")
    text = "\n".join(lines) + "\n"
    if path is not None:
        with open(path, "w") as fh:
            fh.write(text)
    return text


def read_matrix_market(text: str) -> RationalMatrix:
    lines = [ln for ln in text.splitlines() if ln.strip() and not ln.startswith("%")]
    header = text.splitlines()[0].split()
    if len(header) < 5 or header[0] != "%%MatrixMarket" or header[2] != "coordinate":
        raise PreconditionError("only coordinate Matrix Market files are supported")
    rows, cols, nnz = map(int, lines[0].split())
    if rows != cols:
        raise PreconditionError("matrix must be square")
    entries = [[Fraction(0)] * rows for _ in range(rows)]
    for ln in lines[1:1 + nnz]:
        i, j, val = ln.split()
        entries[int(i) - 1][int(j) - 1] = Fraction(val)
    return RationalMatrix.from_fractions(entries)


def format_rational(x: Fraction) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
