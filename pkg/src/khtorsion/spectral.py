"""Spectral sequences and induced maps on Khovanov homology.

Lee and Turner pages come from filtered cancellation: the total differential
``d + d_F`` is reduced by cancelling arrows of quantum degree ``0``, then
``delta``, ``2 delta`` and so on (``delta`` is 4 for Lee and 2 for Turner).
Generators left after the arrows of degree below ``r delta`` are gone span
``E_r``; the arrows cancelled at degree ``r delta`` are the differential
``d_r``.

Induced maps (``nu*``, ``d_T*``, ``d_L*`` and the first Bockstein map) are
matrices on one fixed echelon basis of cycle representatives per bigrading.
Higher Bockstein pages lift cycles to the integers and divide by ``p^r``.
"""

from __future__ import annotations

from collections import Counter, defaultdict
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .braid import BraidWord
from .complex import JUMPS, CubeComplex, Theory, build_complex, nu_chain_map
from .diagram import DEFAULT_CONVENTION, braid_closure, component_subsets_gradings
from .homology import BigradedGroup, FieldTable, Report, integral_homology
from .linalg import GF, QQ, ZZ, RingError, RingTag, echelon_mod_p, rank

Bigrading = tuple[int, int]

STEP = {Theory.LEE: 4, Theory.TURNER: 2}


@dataclass(frozen=True)
class SpectralPage:
    """Page ``r`` of a spectral sequence: dimensions and ranks of ``d_r``."""

    sequence: str
    r: int
    table: dict
    ranks: dict
    bidegree: tuple[int, int]

    @property
    def total(self) -> int:
        return sum(self.table.values())

    def by_i(self) -> dict[int, int]:
        out: dict[int, int] = defaultdict(int)
        for (i, _), v in self.table.items():
            out[i] += v
        return {i: v for i, v in sorted(out.items()) if v}

    def rank_total(self) -> int:
        return sum(self.ranks.values())

    def to_json(self) -> dict:
        return {
            "sequence": self.sequence,
            "r": self.r,
            "bidegree": list(self.bidegree),
            "table": [{"i": i, "j": j, "dim": v} for (i, j), v in sorted(self.table.items())],
            "ranks": [{"i": i, "j": j, "rank": v} for (i, j), v in sorted(self.ranks.items()) if v],
        }


def _field_ops(p: int):
    if p:
        return (lambda x: x % p), (lambda x: pow(x, p - 2, p))
    return (lambda x: x), (lambda x: Fraction(1) / x)


# -- filtered cancellation ---------------------------------------------------


def _cancel_pages(gen_i, gen_j, arrows: dict, step: int, p: int, name: str) -> list[SpectralPage]:
    norm, inv = _field_ops(p)
    out = {a: dict(t) for a, t in arrows.items()}
    inn: dict[int, set] = defaultdict(set)
    for a, targets in out.items():
        for b in targets:
            inn[b].add(a)
    alive = set(range(len(gen_i)))

    def table():
        t = Counter((int(gen_i[g]), int(gen_j[g])) for g in alive)
        return dict(sorted(t.items()))

    def cancel(a, b):
        v = out[a][b]
        iv = inv(v)
        src = [x for x in inn[b] if x != a]
        tgt = [(y, w) for y, w in out[a].items() if y != b]
        for x in src:
            row = out[x]
            f = norm(row[b] * iv)
            for y, w in tgt:
                nv = norm(row.get(y, 0) - f * w)
                if nv:
                    if y not in row:
                        inn[y].add(x)
                    row[y] = nv
                elif y in row:
                    del row[y]
                    inn[y].discard(x)
        for g in (a, b):
            for y in out.pop(g, {}):
                inn[y].discard(g)
            for x in inn.pop(g, set()):
                if x in out:
                    out[x].pop(g, None)
            alive.discard(g)

    pages: list[SpectralPage] = []
    level = 0
    while True:
        before = table()
        ranks: Counter = Counter()
        want = step * level
        progress = True
        while progress:
            progress = False
            for a in sorted(out):
                if a not in out:
                    continue
                cands = [b for b in out[a] if gen_j[b] - gen_j[a] == want]
                if not cands:
                    continue
                b = min(cands, key=lambda y: (len(inn[y]), y))
                ranks[(int(gen_i[a]), int(gen_j[a]))] += 1
                cancel(a, b)
                progress = True
        if level > 0:
            pages.append(SpectralPage(name, level, before, dict(sorted(ranks.items())), (1, want)))
        if not any(out.values()):
            if level == 0 or any(ranks.values()):
                pages.append(SpectralPage(name, level + 1, table(), {}, (1, want + step)))
            break
        level += 1
    return pages


def _arrows(c: CubeComplex, theories, p: int) -> dict:
    arrows: dict[int, dict[int, int]] = defaultdict(dict)
    for th in theories:
        s, t, v = c.edge_coo(th)
        for a, b, x in zip(s.tolist(), t.tolist(), v.tolist()):
            y = arrows[a].get(b, 0) + x
            arrows[a][b] = y % p if p else y
    return {a: {b: x for b, x in row.items() if x} for a, row in arrows.items()}


def filtered_pages(c: CubeComplex) -> list[SpectralPage]:
    """Pages ``E_1, E_2, ...`` of the Lee or Turner spectral sequence.

    The last page returned has no differential left and is ``E_infinity``.
    """
    if c.theory not in STEP:
        raise RingError("filtered pages need a Lee or Turner complex")
    if c.heights != (0, bin(c.free_mask).count("1")):
        raise RingError("filtered pages need the full cube")
    p = c.ring.characteristic
    arrows = _arrows(c, (Theory.KHOVANOV, c.theory), p)
    name = f"{c.theory.value}({c.ring})"
    return _cancel_pages(c.gen_i.tolist(), c.gen_j.tolist(), arrows, STEP[c.theory], p, name)


def spectral_of_word(w: BraidWord, theory: Theory, ring: RingTag, convention: str = DEFAULT_CONVENTION):
    return filtered_pages(build_complex(braid_closure(w, convention), theory, ring))


def infinity_predictions(w: BraidWord, convention: str = DEFAULT_CONVENTION) -> tuple[dict, dict]:
    """Predicted ``E_infinity`` totals by homological grading (Lee, Turner)."""
    counts = Counter(component_subsets_gradings(braid_closure(w, convention)))
    table = dict(sorted(counts.items()))
    return table, dict(table)


def barnatan_dimensions(c: CubeComplex) -> dict[int, int]:
    """Dimensions of filtered Bar-Natan homology over Z2, by homological grading."""
    if c.ring != GF(2):
        raise RingError("Bar-Natan homology is computed over Z2")
    s, t, v = c.edge_coo(Theory.BARNATAN_F2)
    gi = c.gen_i
    out = {}
    lo, hi = c.homological_range()
    local = np.empty(c.n_gens, dtype=np.int64)
    counts = {}
    for i in range(lo, hi + 1):
        idx = np.flatnonzero(gi == i)
        local[idx] = np.arange(idx.size)
        counts[i] = idx.size
    rk = {}
    from .linalg import SparseMat

    for i in range(lo, hi):
        keep = gi[s] == i
        m = SparseMat(counts[i + 1], counts[i], local[t[keep]], local[s[keep]], v[keep] % 2)
        rk[i] = rank(m, GF(2))
    for i in range(lo, hi + 1):
        dim = counts[i] - rk.get(i, 0) - rk.get(i - 1, 0)
        if dim:
            out[i] = dim
    return out


# -- homology bases -----------------------------------------------------------


def _rref(a, p: int):
    """Reduced row echelon form; object arrays of Fractions when ``p == 0``."""
    if p:
        red, piv = echelon_mod_p(np.asarray(a, dtype=np.int64), p)
        return red, [int(x) for x in piv]
    a = np.array(a, dtype=object)
    rows, cols = a.shape if a.ndim == 2 else (0, 0)
    a = a * Fraction(1)
    piv = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = [k for k in range(r, rows) if a[k, c] != 0]
        if not nz:
            continue
        k = nz[0]
        if k != r:
            a[[r, k]] = a[[k, r]]
        a[r] = a[r] / a[r, c]
        for k in range(rows):
            if k != r and a[k, c] != 0:
                a[k] = a[k] - a[k, c] * a[r]
        piv.append(c)
        r += 1
    return a[:r], piv


def _kernel(m, p: int):
    rows, cols = m.shape
    if cols == 0:
        return np.zeros((0, 0), dtype=object if not p else np.int64)
    red, piv = _rref(m, p) if rows else (np.zeros((0, cols)), [])
    free = [c for c in range(cols) if c not in set(piv)]
    dtype = np.int64 if p else object
    basis = np.zeros((len(free), cols), dtype=dtype)
    if not p:
        basis = basis * Fraction(1)
    for n, f in enumerate(free):
        basis[n, f] = 1
        for k, pc in enumerate(piv):
            basis[n, pc] = (-red[k, f]) % p if p else -red[k, f]
    return basis


def _block(c: CubeComplex, coo, src: Bigrading, tgt: Bigrading, p: int):
    """Dense matrix of a chain map between two bigradings (entries reduced mod p)."""
    s, t, v = coo
    src_g, tgt_g = c.generators_at(*src), c.generators_at(*tgt)
    dtype = np.int64 if p else object
    out = np.zeros((tgt_g.size, src_g.size), dtype=dtype)
    if src_g.size == 0 or tgt_g.size == 0:
        return out
    gi, gj, local = c.gen_i, c.gen_j, c.local_index()
    keep = (gi[s] == src[0]) & (gj[s] == src[1]) & (gi[t] == tgt[0]) & (gj[t] == tgt[1])
    for a, b, x in zip(local[s[keep]].tolist(), local[t[keep]].tolist(), v[keep].tolist()):
        out[b, a] += x
    return out % p if p else out


class BigradingBasis:
    """Cycle representatives of ``H^{i,j}`` in echelon form, plus coordinates.

    ``image`` holds an echelon basis of the boundaries and ``witness`` the
    chains they are boundaries of.
    """

    def __init__(self, d_in, d_out, p: int):
        self.p = p
        n = d_out.shape[1]
        self.n = n
        m = d_in.shape[1]
        dtype = np.int64 if p else object
        aug = np.zeros((m, n + m), dtype=dtype)
        if m and n:
            aug[:, :n] = d_in.T
        for k in range(m):
            aug[k, n + k] = 1
        red, piv = _rref(aug, p) if m else (np.zeros((0, n + m), dtype=dtype), [])
        keep = [k for k, c in enumerate(piv) if c < n]
        self.image = red[keep, :n]
        self.image_piv = [piv[k] for k in keep]
        self.witness = red[keep, n:]
        z = _kernel(d_out, p) if n else np.zeros((0, 0), dtype=dtype)
        z = self._reduce_image(z) if len(z) else z
        reps, rpiv = _rref(z, p) if len(z) else (np.zeros((0, n), dtype=dtype), [])
        self.reps = reps
        self.rep_piv = list(rpiv)

    @property
    def dim(self) -> int:
        return len(self.rep_piv)

    def _reduce_image(self, v):
        v = v.copy()
        single = v.ndim == 1
        if single:
            v = v[None, :]
        for row, c in zip(self.image, self.image_piv):
            f = v[:, c].copy()
            v = v - np.outer(f, row)
            if self.p:
                v %= self.p
        return v[0] if single else v

    def coords(self, v, with_witness: bool = False):
        """Coordinates of a cycle on the representatives (and a chain it differs by)."""
        p = self.p
        v = np.array(v, dtype=np.int64 if p else object)
        if p:
            v %= p
        alpha = [v[c] for c in self.image_piv]
        rest = self._reduce_image(v)
        beta = np.array([rest[c] for c in self.rep_piv], dtype=v.dtype)
        if self.dim:
            rest = rest - beta @ self.reps
            if p:
                rest %= p
        if np.any(rest != 0):
            raise AssertionError("vector is not a cycle")
        if not with_witness:
            return beta
        u = np.zeros(self.witness.shape[1], dtype=v.dtype)
        for a, row in zip(alpha, self.witness):
            u = u + a * row
        return beta, (u % p if p else u)


class HomologyBases:
    """Shared bases for all bigradings of a Khovanov complex over a field."""

    def __init__(self, c: CubeComplex, field: RingTag):
        if not field.is_field:
            raise RingError("homology bases need a field")
        self.c = c
        self.p = field.characteristic
        self.field = field
        self._kh = c.edge_coo(Theory.KHOVANOV)
        self._bases: dict[Bigrading, BigradingBasis] = {}

    def d_block(self, i: int, j: int, p: int | None = None):
        return _block(self.c, self._kh, (i, j), (i + 1, j), self.p if p is None else p)

    def __getitem__(self, key: Bigrading) -> BigradingBasis:
        if key not in self._bases:
            i, j = key
            self._bases[key] = BigradingBasis(self.d_block(i - 1, j), self.d_block(i, j), self.p)
        return self._bases[key]

    def bigradings(self) -> list[Bigrading]:
        return [k for k in self.c.bigradings() if self[k].dim]


def homology_bases(c: CubeComplex, field: RingTag) -> HomologyBases:
    key = ("hbases", field)
    if key not in c._cache:
        c._cache[key] = HomologyBases(c, field)
    return c._cache[key]


@dataclass
class InducedMap:
    """Matrices of a map on homology, one per source bigrading (target rows)."""

    name: str
    field: RingTag
    bidegree: tuple[int, int]
    matrices: dict = field(default_factory=dict)

    def rank_at(self, i: int, j: int) -> int:
        m = self.matrices.get((i, j))
        if m is None or m.size == 0:
            return 0
        return len(_rref(m, self.field.characteristic)[1])

    def ranks(self) -> dict:
        return {k: self.rank_at(*k) for k in self.matrices if self.rank_at(*k)}

    def total_rank(self) -> int:
        return sum(self.ranks().values())

    def compose(self, other: "InducedMap") -> dict:
        """Matrices of ``self o other`` keyed by the source bigrading of ``other``."""
        p = self.field.characteristic
        out = {}
        for (i, j), m in other.matrices.items():
            t = (i + other.bidegree[0], j + other.bidegree[1])
            n = self.matrices.get(t)
            if n is None or n.size == 0 or m.size == 0:
                out[(i, j)] = np.zeros((n.shape[0] if n is not None else 0, m.shape[1]), dtype=m.dtype)
                continue
            prod = n @ m
            out[(i, j)] = prod % p if p else prod
        return out


_MAPS = {
    "nu_star": (0, 2),
    "dT_star": (1, 2),
    "dL_star": (1, 4),
    "dB1": (1, 0),
}


def induced_map(c: CubeComplex, which: str, field: RingTag | None = None) -> InducedMap:
    """One of ``nu_star``, ``dT_star``, ``dL_star`` or ``dB1`` on shared bases.

    ``c`` is a Khovanov complex; its generators index every chain map used.
    """
    if which not in _MAPS:
        raise ValueError(f"unknown induced map {which!r}")
    if c.theory is not Theory.KHOVANOV:
        raise RingError("induced maps act on a Khovanov complex")
    field = field or (c.ring if c.ring.is_field else GF(2))
    p = field.characteristic
    if which in ("nu_star", "dT_star") and field != GF(2):
        raise RingError(f"{which} is defined over Z2")
    if which == "dL_star" and (p == 2 or not field.is_field):
        raise RingError("dL_star needs Q or Z_p with p odd")
    if which == "dB1" and not p:
        raise RingError("dB1 needs a prime field")
    bases = homology_bases(c, field)
    di, dj = _MAPS[which]
    if which == "nu_star":
        m = nu_chain_map(c)
        coo = (m.c, m.r, m.v)
    elif which == "dT_star":
        coo = c.edge_coo(Theory.TURNER)
    elif which == "dL_star":
        coo = c.edge_coo(Theory.LEE)
    else:
        coo = None
    out = InducedMap(which, field, (di, dj))
    for key in bases.bigradings():
        src = bases[key]
        tgt_key = (key[0] + di, key[1] + dj)
        tgt = bases[tgt_key]
        cols = []
        if coo is None:
            d_int = bases.d_block(key[0], key[1], p=0)
            for rep in src.reps:
                y = d_int @ np.array([int(x) % p for x in rep], dtype=object)
                if any(int(x) % p for x in y):
                    raise AssertionError("representative is not a cycle")
                cols.append(tgt.coords(np.array([(int(x) // p) % p for x in y], dtype=np.int64)))
        else:
            blk = _block(c, coo, key, tgt_key, p)
            for rep in src.reps:
                y = blk @ rep
                cols.append(tgt.coords(y % p if p else y))
        dtype = np.int64 if p else object
        mat = np.zeros((tgt.dim, src.dim), dtype=dtype)
        for k, col in enumerate(cols):
            if tgt.dim:
                mat[:, k] = col
        out.matrices[key] = mat
    return out


def _zero_squares(mp: InducedMap) -> bool:
    return all(not np.any(m != 0) for m in mp.compose(mp).values())


def tbv_check(c: CubeComplex) -> Report:
    """Check ``d_T* = dB1 nu* + nu* dB1`` over Z2 bigrading by bigrading."""
    nu = induced_map(c, "nu_star", GF(2))
    bo = induced_map(c, "dB1", GF(2))
    dt = induced_map(c, "dT_star", GF(2))
    left = dt.matrices
    a = bo.compose(nu)
    b = nu.compose(bo)
    bad = []
    lhs_rank = rhs_rank = 0
    for key, m in left.items():
        x, y = a.get(key), b.get(key)
        rhs = np.zeros_like(m)
        if x is not None and x.size:
            rhs = rhs + x
        if y is not None and y.size:
            rhs = rhs + y
        rhs %= 2
        if m.shape != rhs.shape or np.any(m != rhs):
            bad.append(key)
        if m.size:
            lhs_rank += len(_rref(m, 2)[1])
            rhs_rank += len(_rref(rhs, 2)[1])
    return Report("tbv", not bad, bad, {"rank_dT": lhs_rank, "rank_rhs": rhs_rank})


def nu_acyclicity(c: CubeComplex) -> Report:
    """``(H(L; Z2), nu*)`` has zero homology at every bigrading."""
    nu = induced_map(c, "nu_star", GF(2))
    bases = homology_bases(c, GF(2))
    bad = []
    if not _zero_squares(nu):
        bad.append("nu*^2 != 0")
    for key in bases.bigradings():
        i, j = key
        h = bases[key].dim - nu.rank_at(i, j) - nu.rank_at(i, j - 2)
        if h:
            bad.append(key)
    return Report("nu_acyclic", not bad, bad, {})


# -- Bockstein ---------------------------------------------------------------


@dataclass
class _Boundary:
    coords: np.ndarray
    lift: np.ndarray
    level: int
    witness: np.ndarray


def _span_rank(vectors, p: int) -> int:
    if not vectors:
        return 0
    return len(_rref(np.array(vectors, dtype=np.int64), p)[1])


def bockstein_pages(c: CubeComplex, p: int, z: BigradedGroup | None = None) -> list[SpectralPage]:
    """Bockstein pages for the prime ``p`` by lifting cycles to the integers.

    A class on page ``r`` carries an integral lift ``x`` with ``d x = p^r y``;
    ``d_r`` sends it to the class of ``y``.  Pages continue until ``r``
    exceeds the largest power of ``p`` in the integral torsion.
    """
    if c.theory is not Theory.KHOVANOV:
        raise RingError("Bockstein pages need a Khovanov complex")
    if z is None:
        cz = c if c.ring == ZZ else build_complex(c.diagram, Theory.KHOVANOV, ZZ, heights=c.heights)
        z = integral_homology(cz)
    top = max((_valuation(t, p) for (i, j), (_, tors) in z.table.items() for t in tors), default=0)
    bases = homology_bases(c, GF(p))
    keys = bases.bigradings()
    name = f"bockstein({p})"

    # Z_r: list of (coords in H, integral lift); B_r: list of _Boundary
    cyc = {}
    bnd: dict[Bigrading, list[_Boundary]] = {k: [] for k in keys}
    for k in keys:
        b = bases[k]
        cyc[k] = [(np.eye(b.dim, dtype=np.int64)[t], b.reps[t].astype(object)) for t in range(b.dim)]
    pages = []
    r = 1
    while True:
        table = {k: len(cyc[k]) - len(bnd[k]) for k in keys if len(cyc[k]) - len(bnd[k])}
        ranks = {}
        new_cyc = {}
        new_bnd = {k: list(v) for k, v in bnd.items()}
        for k in keys:
            i, j = k
            tk = (i + 1, j)
            tb = bases[tk]
            d_int = bases.d_block(i, j, p=0)
            images = []
            for coord, lift in cyc[k]:
                y = d_int @ lift if d_int.size else np.zeros(0, dtype=object)
                q = p**r
                if any(int(v) % q for v in y):
                    raise AssertionError("lift is not a cycle modulo p^r")
                ym = np.array([(int(v) // q) % p for v in y], dtype=np.int64)
                if tb.n:
                    beta, u = tb.coords(ym, with_witness=True)
                else:
                    beta, u = np.zeros(0, np.int64), np.zeros(0, np.int64)
                images.append((beta, u))
            old = [e.coords for e in bnd.get(tk, [])]
            cols = [beta for beta, _ in images]
            rk = _span_rank(old + cols, p) - _span_rank(old, p) if tb.dim else 0
            if rk:
                ranks[k] = rk
                span = list(old)
                for (beta, u), (coord, lift) in zip(images, cyc[k]):
                    if _span_rank(span + [beta], p) > len(span):
                        span.append(beta)
                        new_bnd[tk].append(_Boundary(beta, lift, r, u))
            new_cyc[k] = _next_cycles(cyc[k], images, bnd.get(tk, []), r, p, tb.dim)
        pages.append(SpectralPage(name, r, dict(sorted(table.items())), dict(sorted(ranks.items())), (1, 0)))
        if r > top and not ranks:
            break
        cyc, bnd = new_cyc, new_bnd
        r += 1
    return pages


def _next_cycles(cycles, images, boundaries, r, p, tdim):
    """Classes on which ``d_r`` vanishes modulo ``B_r``, with lifts good mod ``p^(r+1)``."""
    if not cycles:
        return []
    m = len(cycles)
    cols = [beta for beta, _ in images] + [(-e.coords) % p for e in boundaries]
    mat = np.array(cols, dtype=np.int64).reshape(len(cols), tdim).T % p
    ker = _kernel(mat, p)
    out = []
    for vec in ker:
        cpart, epart = vec[:m], vec[m:]
        coord = sum(int(x) * co for x, co in zip(cpart, (co for co, _ in cycles))) % p
        lift = sum(int(x) * lf for x, lf in zip(cpart, (lf for _, lf in cycles)))
        u = sum(int(x) * img[1] for x, img in zip(cpart, images))
        for x, e in zip(epart, boundaries):
            x = int(x)
            if x:
                lift = lift - x * p ** (r - e.level) * e.lift
                u = u - x * e.witness
        if not isinstance(u, int) and u.size:
            lift = lift - p**r * np.array([int(v) % p for v in u], dtype=object)
        out.append((np.asarray(coord, dtype=np.int64), np.asarray(lift, dtype=object)))
    return out


def _valuation(n: int, p: int) -> int:
    v = 0
    while n and n % p == 0:
        n //= p
        v += 1
    return v


def bockstein_prediction(z: BigradedGroup, p: int, r: int) -> tuple[dict, dict]:
    """Page ``r`` of the Bockstein sequence read off integral homology."""
    table: Counter = Counter()
    ranks: Counter = Counter()
    for (i, j), (free, tors) in z.table.items():
        if free:
            table[(i, j)] += free
        for t in tors:
            k = _valuation(t, p)
            if k >= r:
                table[(i, j)] += 1
                table[(i - 1, j)] += 1
            if k == r:
                ranks[(i - 1, j)] += 1
    return {k: v for k, v in sorted(table.items()) if v}, {k: v for k, v in sorted(ranks.items()) if v}


def free_mod_p(z: BigradedGroup) -> dict:
    return {k: v for k, v in sorted(z.free_table().table.items()) if v}


def page_checks(pages: list[SpectralPage]) -> Report:
    """Rank recursion between consecutive pages."""
    bad = []
    for a, b in zip(pages, pages[1:]):
        di, dj = a.bidegree
        keys = set(a.table) | set(b.table)
        for k in keys:
            into = a.ranks.get((k[0] - di, k[1] - dj), 0)
            if a.table.get(k, 0) - a.ranks.get(k, 0) - into != b.table.get(k, 0):
                bad.append((a.r, k))
    return Report("rank_recursion", not bad, bad, {})


def e1_matches(pages: list[SpectralPage], table: FieldTable) -> bool:
    return pages[0].table == {k: v for k, v in table.table.items() if v}


__all__ = [
    "SpectralPage",
    "InducedMap",
    "HomologyBases",
    "filtered_pages",
    "spectral_of_word",
    "infinity_predictions",
    "barnatan_dimensions",
    "homology_bases",
    "induced_map",
    "tbv_check",
    "nu_acyclicity",
    "bockstein_pages",
    "bockstein_prediction",
    "free_mod_p",
    "page_checks",
    "e1_matches",
    "QQ",
]
