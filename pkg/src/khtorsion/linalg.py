"""Exact linear algebra over the integers and over fields.

Large sparse matrices go through unit-pivot elimination first
(:mod:`khtorsion._eliminate`); the small residual is finished densely with
arbitrary-precision integers.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd

import numpy as np

from . import _accel
from ._accel import njit
from ._eliminate import eliminate_numba, eliminate_python


class RingError(ValueError):
    pass


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    f = 3
    while f * f <= p:
        if p % f == 0:
            return False
        f += 2
    return True


@dataclass(frozen=True)
class RingTag:
    kind: str  # "Z", "Q" or "p"
    p: int = 0

    def __post_init__(self):
        if self.kind not in ("Z", "Q", "p"):
            raise RingError(f"unknown ring kind {self.kind!r}")
        if self.kind == "p" and not (is_prime(self.p) and self.p < 2**31):
            raise RingError(f"{self.p} is not a prime below 2^31")

    @property
    def is_field(self) -> bool:
        return self.kind != "Z"

    @property
    def characteristic(self) -> int:
        return self.p if self.kind == "p" else 0

    def __str__(self) -> str:
        return {"Z": "Z", "Q": "Q"}.get(self.kind, f"Z{self.p}")


ZZ = RingTag("Z")
QQ = RingTag("Q")


def GF(p: int) -> RingTag:
    return RingTag("p", int(p))


def parse_ring(text: str) -> RingTag:
    """Accept ``Z``, ``Q``, ``Z2``, ``Z_3``, ``F5`` and plain primes such as ``7``."""
    t = text.strip().upper().replace("_", "").replace("/", "")
    if t in ("Z", "ZZ"):
        return ZZ
    if t in ("Q", "QQ"):
        return QQ
    for prefix in ("Z", "F", "GF"):
        if t.startswith(prefix) and t[len(prefix):].isdigit():
            return GF(int(t[len(prefix):]))
    if t.isdigit():
        return GF(int(t))
    raise RingError(f"cannot parse ring {text!r}")


class SparseMat:
    """Sparse integer matrix stored as coordinate arrays.

    Duplicate coordinates are summed and zeros dropped on construction.
    """

    __slots__ = ("rows", "cols", "r", "c", "v")

    def __init__(self, rows: int, cols: int, r=(), c=(), v=()):
        self.rows = int(rows)
        self.cols = int(cols)
        r = np.asarray(r, dtype=np.int64).ravel()
        c = np.asarray(c, dtype=np.int64).ravel()
        v = np.asarray(v, dtype=object if _needs_object(v) else np.int64).ravel()
        if r.size and (r.min() < 0 or r.max() >= self.rows or c.min() < 0 or c.max() >= self.cols):
            raise IndexError("matrix entry out of range")
        if r.size:
            key = r * max(self.cols, 1) + c
            order = np.argsort(key, kind="stable")
            key, r, c, v = key[order], r[order], c[order], v[order]
            first = np.ones(key.size, dtype=bool)
            first[1:] = key[1:] != key[:-1]
            starts = np.flatnonzero(first)
            if starts.size != key.size:
                v = np.add.reduceat(v, starts)
                r, c = r[starts], c[starts]
            keep = v != 0
            r, c, v = r[keep], c[keep], v[keep]
        self.r, self.c, self.v = r, c, v

    @classmethod
    def from_dict(cls, rows, cols, entries: dict) -> "SparseMat":
        items = list(entries.items())
        return cls(rows, cols, [k[0] for k, _ in items], [k[1] for k, _ in items], [x for _, x in items])

    @classmethod
    def from_dense(cls, a) -> "SparseMat":
        a = [list(map(int, row)) for row in a]
        rows = len(a)
        cols = len(a[0]) if rows else 0
        coords = [(i, j, x) for i, row in enumerate(a) for j, x in enumerate(row) if x]
        return cls(rows, cols, [t[0] for t in coords], [t[1] for t in coords], [t[2] for t in coords])

    @property
    def nnz(self) -> int:
        return int(self.v.size)

    @property
    def entries(self) -> dict:
        return {(int(a), int(b)): int(x) for a, b, x in zip(self.r, self.c, self.v)}

    def to_dense(self, dtype=object) -> np.ndarray:
        out = np.zeros((self.rows, self.cols), dtype=dtype)
        for a, b, x in zip(self.r, self.c, self.v):
            out[a, b] = x
        return out

    def matvec(self, x) -> list[int]:
        """Exact product with an integer vector (Python ints)."""
        y = [0] * self.rows
        for a, b, val in zip(self.r.tolist(), self.c.tolist(), self.v.tolist()):
            xb = x[b]
            if xb:
                y[a] += val * int(xb)
        return y

    def __repr__(self) -> str:
        return f"SparseMat({self.rows}x{self.cols}, nnz={self.nnz})"


def _needs_object(v) -> bool:
    if isinstance(v, np.ndarray):
        return v.dtype == object
    return any(abs(int(x)) >= 2**62 for x in v)


@dataclass(frozen=True)
class SmithDecomposition:
    diagonal: tuple[int, ...]
    rank: int
    left: tuple | None = None
    right: tuple | None = None

    @property
    def torsion(self) -> tuple[int, ...]:
        return tuple(d for d in self.diagonal if d > 1)


# -- elimination front end ---------------------------------------------------


def _reduce(m: SparseMat, p: int):
    """Unit-pivot elimination; returns (pivot count, residual rows dict)."""
    if m.nnz == 0:
        return 0, {}
    if _accel.numba_enabled() and m.v.dtype != object:
        out = eliminate_numba(m.rows, m.cols, m.r, m.c, m.v, p)
        if out is not None:
            return out
    return eliminate_python(m.rows, m.cols, m.entries, p)


def _dense_rows(residual: dict) -> list[list[int]]:
    rows = sorted(residual)
    cols = sorted({c for r in rows for c in residual[r]})
    cidx = {c: k for k, c in enumerate(cols)}
    out = []
    for r in rows:
        line = [0] * len(cols)
        for c, x in residual[r].items():
            line[cidx[c]] = int(x)
        out.append(line)
    return out


def _check_field(field: RingTag) -> int:
    if not field.is_field:
        raise RingError("a field is required here; use smith_normal_form over the integers")
    return field.characteristic


def rank(m: SparseMat, ring: RingTag = QQ) -> int:
    """Rank over a field, or over the integers (which equals the rational rank)."""
    p = ring.characteristic
    npiv, residual = _reduce(m, p)
    if not residual:
        return npiv
    if p:
        return npiv + _rank_mod_dense(_dense_rows(residual), p)
    return npiv + len(_snf_dense(_dense_rows(residual))[0])


def _rank_mod_dense(a: list[list[int]], p: int) -> int:
    if not a:
        return 0
    mat = np.array(a, dtype=np.int64) % p
    return echelon_mod_p(mat, p)[1].size


@njit
def _rref_numba(a, p):
    rows, cols = a.shape
    piv = np.empty(min(rows, cols), dtype=np.int64)
    nzc = np.empty(cols, dtype=np.int64)
    r = 0
    for c in range(cols):
        if r == rows:
            break
        k = -1
        for i in range(r, rows):
            if a[i, c] != 0:
                k = i
                break
        if k < 0:
            continue
        if k != r:
            for t in range(cols):
                tmp = a[r, t]
                a[r, t] = a[k, t]
                a[k, t] = tmp
        b = a[r, c]
        inv = 1
        e = p - 2
        while e > 0:
            if e & 1:
                inv = (inv * b) % p
            b = (b * b) % p
            e >>= 1
        m = 0
        for t in range(c, cols):
            if a[r, t] != 0:
                a[r, t] = (a[r, t] * inv) % p
                nzc[m] = t
                m += 1
        for i in range(rows):
            if i != r and a[i, c] != 0:
                f = a[i, c]
                for q in range(m):
                    t = nzc[q]
                    a[i, t] = (a[i, t] - f * a[r, t]) % p
        piv[r] = c
        r += 1
    return r, piv


def _echelon_numpy(a: np.ndarray, p: int):
    rows, cols = a.shape
    pivots = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.flatnonzero(a[r:, c])
        if nz.size == 0:
            continue
        k = r + nz[0]
        if k != r:
            a[[r, k]] = a[[k, r]]
        a[r] = (a[r] * pow(int(a[r, c]), p - 2, p)) % p
        col = a[:, c].copy()
        col[r] = 0
        nzr = np.flatnonzero(col)
        if nzr.size:
            a[nzr] = (a[nzr] - np.outer(col[nzr], a[r])) % p
        pivots.append(c)
        r += 1
    return r, np.array(pivots, dtype=np.int64)


def echelon_mod_p(mat: np.ndarray, p: int):
    """Reduced row echelon form modulo ``p``; returns (matrix, pivot columns)."""
    a = np.array(mat, dtype=np.int64) % p
    if a.ndim != 2:
        a = a.reshape(0, 0)
    if _accel.numba_enabled() and a.size:
        r, piv = _rref_numba(a, p)
        return a[:r], piv[:r].copy()
    r, piv = _echelon_numpy(a, p)
    return a[:r], piv


def _kernel_mod_p(dense: np.ndarray, p: int):
    rows, cols = dense.shape
    red, piv = echelon_mod_p(dense, p) if rows else (np.zeros((0, cols), dtype=np.int64), np.zeros(0, dtype=np.int64))
    free = [c for c in range(cols) if c not in set(piv.tolist())]
    basis = []
    for f in free:
        v = np.zeros(cols, dtype=np.int64)
        v[f] = 1
        for k, pc in enumerate(piv):
            v[pc] = (-red[k, f]) % p
        basis.append(v)
    return len(piv), basis


def _kernel_rational(dense: list[list[int]], cols: int):
    a = [[Fraction(x) for x in row] for row in dense]
    piv = []
    r = 0
    for c in range(cols):
        k = next((i for i in range(r, len(a)) if a[i][c] != 0), None)
        if k is None:
            continue
        a[r], a[k] = a[k], a[r]
        inv = 1 / a[r][c]
        a[r] = [x * inv for x in a[r]]
        for i in range(len(a)):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        piv.append(c)
        r += 1
        if r == len(a):
            break
    pivset = set(piv)
    basis = []
    for f in (c for c in range(cols) if c not in pivset):
        v = [Fraction(0)] * cols
        v[f] = Fraction(1)
        for k, pc in enumerate(piv):
            v[pc] = -a[k][f]
        den = 1
        for x in v:
            den = den * x.denominator // gcd(den, x.denominator)
        basis.append([int(x * den) for x in v])
    return len(piv), basis


def rank_kernel(m: SparseMat, field: RingTag):
    """Rank and a kernel basis over a field.

    Kernel vectors are residues in ``[0, p)`` over a prime field and
    primitive integer vectors over the rationals.
    """
    p = _check_field(field)
    dense = m.to_dense()
    if p:
        rk, basis = _kernel_mod_p(np.array(dense, dtype=np.int64).reshape(m.rows, m.cols), p)
        basis = [tuple(int(x) for x in v) for v in basis]
        for v in basis:
            assert all(y % p == 0 for y in m.matvec(v))
    else:
        rk, basis = _kernel_rational(dense.tolist(), m.cols)
        basis = [tuple(v) for v in basis]
        for v in basis:
            assert not any(m.matvec(v))
    assert rk + len(basis) == m.cols
    return rk, basis


# -- Smith normal form -------------------------------------------------------


def _snf_dense(a: list[list[int]], transforms: bool = False):
    """Smith form of a dense integer matrix (lists of Python ints).

    Pivot choice: an entry of least absolute value, ties broken by lowest
    row then lowest column.  Returns (diagonal, L, R) with L*A*R diagonal
    when ``transforms`` is set.
    """
    a = [list(row) for row in a]
    m = len(a)
    n = len(a[0]) if m else 0
    L = [[int(i == j) for j in range(m)] for i in range(m)] if transforms else None
    R = [[int(i == j) for j in range(n)] for i in range(n)] if transforms else None

    def swap_rows(i, k):
        a[i], a[k] = a[k], a[i]
        if L is not None:
            L[i], L[k] = L[k], L[i]

    def swap_cols(j, k):
        for row in a:
            row[j], row[k] = row[k], row[j]
        if R is not None:
            for row in R:
                row[j], row[k] = row[k], row[j]

    def add_row(dst, src, f):  # row dst += f * row src
        a[dst] = [x + f * y for x, y in zip(a[dst], a[src])]
        if L is not None:
            L[dst] = [x + f * y for x, y in zip(L[dst], L[src])]

    def add_col(dst, src, f):
        for row in a:
            row[dst] += f * row[src]
        if R is not None:
            for row in R:
                row[dst] += f * row[src]

    diag = []
    t = 0
    while t < min(m, n):
        best = None
        for i in range(t, m):
            row = a[i]
            for j in range(t, n):
                x = row[j]
                if x and (best is None or abs(x) < best[0]):
                    best = (abs(x), i, j)
                    if best[0] == 1:
                        break
            if best is not None and best[0] == 1:
                break
        if best is None:
            break
        _, i, j = best
        swap_rows(t, i)
        swap_cols(t, j)
        while True:
            piv = a[t][t]
            dirty = False
            for i in range(t + 1, m):
                if a[i][t]:
                    add_row(i, t, -(a[i][t] // piv))
                    dirty |= a[i][t] != 0
            for j in range(t + 1, n):
                if a[t][j]:
                    add_col(j, t, -(a[t][j] // piv))
                    dirty |= a[t][j] != 0
            if dirty:
                cand = [(abs(a[i][t]), i, t) for i in range(t, m) if a[i][t]]
                cand += [(abs(a[t][j]), t, j) for j in range(t, n) if a[t][j]]
                _, i, j = min(cand)
                swap_rows(t, i)
                swap_cols(t, j)
                continue
            bad = next(
                (i for i in range(t + 1, m) if any(x % piv for x in a[i][t + 1:])),
                None,
            )
            if bad is None:
                break
            add_row(t, bad, 1)
        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            if L is not None:
                L[t] = [-x for x in L[t]]
        diag.append(a[t][t])
        t += 1
    return diag, L, R


def smith_normal_form(m: SparseMat, transforms: bool = False) -> SmithDecomposition:
    """Smith normal form over the integers.

    Without ``transforms`` the matrix is first shrunk by unit-pivot
    elimination, which only removes invariant factors equal to 1.
    """
    if transforms:
        diag, L, R = _snf_dense(m.to_dense().tolist(), transforms=True)
        return SmithDecomposition(
            tuple(diag), len(diag), tuple(map(tuple, L)), tuple(map(tuple, R))
        )
    npiv, residual = _reduce(m, 0)
    diag = [1] * npiv
    if residual:
        diag += _snf_dense(_dense_rows(residual))[0]
    return SmithDecomposition(tuple(diag), len(diag))


def invariant_factors(m: SparseMat) -> tuple[int, list[int]]:
    """Rank and the invariant factors greater than one."""
    snf = smith_normal_form(m)
    return snf.rank, list(snf.torsion)


def prime_power_factors(n: int) -> list[int]:
    """Split ``n > 1`` into its prime-power parts, ascending by prime."""
    out = []
    f = 2
    while f * f <= n:
        if n % f == 0:
            q = 1
            while n % f == 0:
                n //= f
                q *= f
            out.append(q)
        f += 1
    if n > 1:
        out.append(n)
    return out


def lift_and_divide(x, d: SparseMat, p: int, r: int = 1) -> list[int]:
    """Chain-level Bockstein step: ``(d * lift(x)) / p**r`` reduced mod ``p``.

    ``lift(x)`` takes the representatives in ``[0, p)``.  Raises
    ``ArithmeticError`` when ``d * lift(x)`` is not divisible by ``p**r``.
    """
    if len(x) != d.cols:
        raise ValueError("vector length does not match the matrix")
    lifted = [int(v) % p for v in x]
    y = d.matvec(lifted)
    q = p**r
    if any(v % q for v in y):
        raise ArithmeticError(f"input is not a cycle modulo {p}^{r}")
    return [(v // q) % p for v in y]


def lift_and_divide_exact(xt, d: SparseMat, p: int, r: int = 1) -> list[int]:
    """As :func:`lift_and_divide` for an already chosen integral lift ``xt``."""
    y = d.matvec(xt)
    q = p**r
    if any(v % q for v in y):
        raise ArithmeticError(f"lift is not a cycle modulo {p}^{r}")
    return [(v // q) % p for v in y]
