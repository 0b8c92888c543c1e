"""Cube of resolutions and the bigraded chain complexes built on it.

Generators are pairs (vertex, labeling).  A vertex is an int whose bit ``r``
is the smoothing of crossing ``r``; a labeling is an int whose bit ``c`` is
the label of circle ``c`` (0 for ``1``, 1 for ``X``).  Generators are
ordered lexicographically by (vertex, labeling).

Every theory is described by two 0/1 tables: ``merge[xa, xb, xc]`` says the
merge of labels ``xa, xb`` has a term ``xc``, and ``split[xa, xb, xc]`` says
the split of ``xa`` has a term ``xb (x) xc``.  All coefficients are 1 before
the edge sign ``(-1)^(number of 1s before position r)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from . import _accel
from ._accel import njit
from .diagram import PlanarDiagram, all_states
from .linalg import GF, QQ, RingError, RingTag, SparseMat


class Theory(Enum):
    KHOVANOV = "khovanov"
    LEE = "lee"
    TURNER = "turner"
    BARNATAN_F2 = "barnatan"


def _tables(merge_terms, split_terms):
    m = np.zeros((2, 2, 2), dtype=np.int64)
    s = np.zeros((2, 2, 2), dtype=np.int64)
    for t in merge_terms:
        m[t] = 1
    for t in split_terms:
        s[t] = 1
    return m, s


_KH = ([(0, 0, 0), (0, 1, 1), (1, 0, 1)], [(0, 0, 1), (0, 1, 0), (1, 1, 1)])
_LEE = ([(1, 1, 0)], [(1, 0, 0)])
_TURNER = ([(1, 1, 1)], [(0, 0, 0)])

TABLES = {
    Theory.KHOVANOV: _tables(*_KH),
    Theory.LEE: _tables(*_LEE),
    Theory.TURNER: _tables(*_TURNER),
    Theory.BARNATAN_F2: _tables(_KH[0] + _TURNER[0], _KH[1] + _TURNER[1]),
}

# shift of the quantum grading along an edge
JUMPS = {
    Theory.KHOVANOV: (0,),
    Theory.LEE: (4,),
    Theory.TURNER: (2,),
    Theory.BARNATAN_F2: (0, 2),
}


def check_ring(theory: Theory, ring: RingTag) -> None:
    if theory is Theory.LEE and ring.characteristic == 2:
        raise RingError("Lee theory needs Q or Z_p with p odd; use the Turner theory over Z2")
    if theory is Theory.LEE and ring.kind == "Z":
        raise RingError("Lee theory needs Q or Z_p with p odd")
    if theory in (Theory.TURNER, Theory.BARNATAN_F2) and ring != GF(2):
        raise RingError(f"{theory.value} theory is defined over Z2 only")


# -- edge kernels ------------------------------------------------------------


@njit
def _popcount(x):
    c = 0
    while x:
        x &= x - 1
        c += 1
    return c


@njit
def _edges_numba(src_idx, vertices, vpos, circ, ncirc, rep, offsets, cross, merge_tab, split_tab):
    n = cross.shape[0]
    mcount = merge_tab.sum()
    scount = split_tab.sum()
    total = 0
    for k in range(src_idx.shape[0]):
        vi = src_idx[k]
        v = vertices[vi]
        nc = ncirc[vi]
        for r in range(n):
            if (v >> r) & 1:
                continue
            wi = vpos[v | (1 << r)]
            if wi < 0:
                continue
            if ncirc[wi] < nc:
                total += mcount << (nc - 2)
            else:
                total += scount << (nc - 1)
    src = np.empty(total, dtype=np.int64)
    tgt = np.empty(total, dtype=np.int64)
    val = np.empty(total, dtype=np.int8)
    tmap = np.empty(circ.shape[1] + 1, dtype=np.int64)
    pos = 0
    for k in range(src_idx.shape[0]):
        vi = src_idx[k]
        v = vertices[vi]
        nc = ncirc[vi]
        base_src = offsets[vi]
        for r in range(n):
            if (v >> r) & 1:
                continue
            wi = vpos[v | (1 << r)]
            if wi < 0:
                continue
            sign = 1 - 2 * (_popcount(v & ((1 << r) - 1)) & 1)
            base_tgt = offsets[wi]
            c0 = circ[vi, cross[r, 0]]
            c1 = c0
            for e in range(1, 4):
                x = circ[vi, cross[r, e]]
                if x != c0:
                    c1 = x
            w0 = circ[wi, cross[r, 0]]
            w1 = w0
            for e in range(1, 4):
                x = circ[wi, cross[r, e]]
                if x != w0:
                    w1 = x
            a, b = min(c0, c1), max(c0, c1)
            ta, tb = min(w0, w1), max(w0, w1)
            for c in range(nc):
                tmap[c] = circ[wi, rep[vi, c]]
            merging = ncirc[wi] < nc
            for lab in range(1 << nc):
                base = 0
                for c in range(nc):
                    if c != a and c != b and (lab >> c) & 1:
                        base |= 1 << tmap[c]
                if merging:
                    xa = (lab >> a) & 1
                    xb = (lab >> b) & 1
                    for xc in range(2):
                        if merge_tab[xa, xb, xc]:
                            src[pos] = base_src + lab
                            tgt[pos] = base_tgt + (base | (xc << ta))
                            val[pos] = sign
                            pos += 1
                else:
                    xa = (lab >> a) & 1
                    for xb in range(2):
                        for xc in range(2):
                            if split_tab[xa, xb, xc]:
                                src[pos] = base_src + lab
                                tgt[pos] = base_tgt + (base | (xb << ta) | (xc << tb))
                                val[pos] = sign
                                pos += 1
    return src, tgt, val


def _edges_numpy(src_idx, vertices, vpos, circ, ncirc, rep, offsets, cross, merge_tab, split_tab):
    n = cross.shape[0]
    out_s, out_t, out_v = [], [], []
    maxc = circ.shape[1]
    for r in range(n):
        vs = vertices[src_idx]
        ok = ((vs >> r) & 1) == 0
        sel = src_idx[ok]
        vs = vs[ok]
        wi = vpos[vs | (1 << r)]
        keep = wi >= 0
        sel, vs, wi = sel[keep], vs[keep], wi[keep]
        if sel.size == 0:
            continue
        low = vs & ((1 << r) - 1)
        pc = np.zeros_like(low)
        x = low.copy()
        while np.any(x):
            pc += x & 1
            x >>= 1
        sign = 1 - 2 * (pc & 1)
        cv = circ[sel][:, cross[r]].astype(np.int64)
        cw = circ[wi][:, cross[r]].astype(np.int64)
        a, b = cv.min(axis=1), cv.max(axis=1)
        ta, tb = cw.min(axis=1), cw.max(axis=1)
        nc = ncirc[sel]
        merging = ncirc[wi] < nc
        # circle map from v to w through representative arcs
        reps = np.clip(rep[sel], 0, None)
        tmap = circ[wi[:, None], reps].astype(np.int64)
        counts = np.int64(1) << nc
        gsrc_vertex = np.repeat(np.arange(sel.size), counts)
        lab = np.arange(counts.sum()) - np.repeat(np.cumsum(counts) - counts, counts)
        ga, gb = a[gsrc_vertex], b[gsrc_vertex]
        base = np.zeros_like(lab)
        for c in range(maxc):
            bit = (lab >> c) & 1
            live = (c < nc[gsrc_vertex]) & (c != ga) & (c != gb) & (bit == 1)
            base |= np.where(live, np.int64(1) << np.where(live, tmap[gsrc_vertex, c], 0), 0)
        xa = (lab >> ga) & 1
        xb = (lab >> gb) & 1
        gmerge = merging[gsrc_vertex]
        src_g = offsets[sel][gsrc_vertex] + lab
        tgt_base = offsets[wi][gsrc_vertex] + base
        gta, gtb = ta[gsrc_vertex], tb[gsrc_vertex]
        gsign = sign[gsrc_vertex]
        for xc in range(2):
            hit = gmerge & (merge_tab[xa, xb, xc] == 1)
            out_s.append(src_g[hit])
            out_t.append(tgt_base[hit] + (xc << gta[hit]))
            out_v.append(gsign[hit])
        for y1 in range(2):
            for y2 in range(2):
                hit = ~gmerge & (split_tab[xa, y1, y2] == 1)
                out_s.append(src_g[hit])
                out_t.append(tgt_base[hit] + (y1 << gta[hit]) + (y2 << gtb[hit]))
                out_v.append(gsign[hit])
    if not out_s:
        return np.zeros(0, np.int64), np.zeros(0, np.int64), np.zeros(0, np.int8)
    s = np.concatenate(out_s)
    t = np.concatenate(out_t)
    v = np.concatenate(out_v).astype(np.int8)
    order = np.lexsort((t, s))
    return s[order], t[order], v[order]


def _representatives(circ, ncirc):
    rep = np.full((circ.shape[0], max(circ.shape[1], 1)), -1, dtype=np.int64)
    rows = np.arange(circ.shape[0])
    for a in range(circ.shape[1] - 1, -1, -1):
        rep[rows, circ[:, a]] = a
    return rep


# -- the complex ---------------------------------------------------------------


@dataclass
class CubeComplex:
    """Cube of resolutions of a diagram with one Frobenius theory attached.

    ``heights`` optionally restricts the cube to vertices of height in an
    inclusive range, which is enough to get homology strictly inside it.
    """

    diagram: PlanarDiagram
    theory: Theory
    ring: RingTag
    heights: tuple[int, int]
    vertices: np.ndarray
    vpos: np.ndarray
    circ: np.ndarray
    ncirc: np.ndarray
    offsets: np.ndarray
    n_plus: int
    n_minus: int
    free_mask: int
    _cache: dict = field(default_factory=dict, repr=False)

    # grading data ---------------------------------------------------------

    @property
    def n_gens(self) -> int:
        return int(self.offsets[-1])

    def vertex_heights(self) -> np.ndarray:
        return _popcounts(self.vertices & self.free_mask)

    def _gens(self):
        if "gens" not in self._cache:
            counts = np.diff(self.offsets)
            vidx = np.repeat(np.arange(len(self.vertices)), counts)
            label = np.arange(self.n_gens, dtype=np.int64) - self.offsets[:-1][vidx]
            h = self.vertex_heights()[vidx]
            q = self.ncirc[vidx] - 2 * _popcounts(label)
            i = h - self.n_minus
            j = q + h + self.n_plus - 2 * self.n_minus
            self._cache["gens"] = (vidx, label, i, j)
        return self._cache["gens"]

    @property
    def gen_vertex_index(self) -> np.ndarray:
        return self._gens()[0]

    @property
    def gen_label(self) -> np.ndarray:
        return self._gens()[1]

    @property
    def gen_i(self) -> np.ndarray:
        return self._gens()[2]

    @property
    def gen_j(self) -> np.ndarray:
        return self._gens()[3]

    def _block_index(self):
        if "blocks" not in self._cache:
            i, j = self.gen_i, self.gen_j
            order = np.lexsort((np.arange(self.n_gens), j, i))
            keys = np.stack([i[order], j[order]], axis=1)
            local = np.empty(self.n_gens, dtype=np.int64)
            blocks: dict[tuple[int, int], np.ndarray] = {}
            if order.size:
                change = np.ones(order.size, dtype=bool)
                change[1:] = np.any(keys[1:] != keys[:-1], axis=1)
                starts = np.flatnonzero(change)
                ends = np.append(starts[1:], order.size)
                for s, e in zip(starts, ends):
                    members = order[s:e]
                    blocks[(int(keys[s, 0]), int(keys[s, 1]))] = members
                    local[members] = np.arange(e - s)
            self._cache["blocks"] = (blocks, local)
        return self._cache["blocks"]

    def bigradings(self) -> list[tuple[int, int]]:
        return sorted(self._block_index()[0])

    def generators_at(self, i: int, j: int) -> np.ndarray:
        """Global indices of the generators in bigrading (i, j), ascending."""
        return self._block_index()[0].get((i, j), np.zeros(0, dtype=np.int64))

    def dim(self, i: int, j: int) -> int:
        return int(self.generators_at(i, j).size)

    def local_index(self) -> np.ndarray:
        return self._block_index()[1]

    def homological_range(self) -> tuple[int, int]:
        lo, hi = self.heights
        return lo - self.n_minus, hi - self.n_minus

    # differentials --------------------------------------------------------

    def edge_coo(self, theory: Theory | None = None, src_heights: tuple[int, int] | None = None):
        """COO triples (source, target, sign) of a theory's differential."""
        theory = theory or self.theory
        key = ("coo", theory, src_heights)
        if key in self._cache:
            return self._cache[key]
        merge_tab, split_tab = TABLES[theory]
        hv = self.vertex_heights()
        lo, hi = src_heights if src_heights is not None else self.heights
        src_idx = np.flatnonzero((hv >= lo) & (hv <= hi)).astype(np.int64)
        rep = _representatives(self.circ, self.ncirc)
        fn = _edges_numba if _accel.numba_enabled() else _edges_numpy
        out = fn(
            src_idx,
            self.vertices,
            self.vpos,
            self.circ,
            self.ncirc,
            rep,
            self.offsets,
            self.diagram.crossings,
            merge_tab,
            split_tab,
        )
        if self.n_gens < 2_000_000:
            self._cache[key] = out
        return out

    def matrix(self, theory: Theory | None = None) -> SparseMat:
        """The whole differential as an ``n_gens x n_gens`` matrix (target rows)."""
        s, t, v = self.edge_coo(theory)
        return SparseMat(self.n_gens, self.n_gens, t, s, self._reduce_values(v))

    def _reduce_values(self, v):
        v = v.astype(np.int64)
        p = self.ring.characteristic
        return v % p if p else v

    def differential_block(self, i: int, j: int, theory: Theory | None = None, jump: int | None = None) -> SparseMat:
        """Matrix of the differential from bigrading (i, j).

        Rows are the generators of the target bigrading(s) in order; for a
        theory with several quantum jumps the target blocks are stacked by
        increasing jump unless ``jump`` selects one.
        """
        theory = theory or self.theory
        jumps = JUMPS[theory] if jump is None else (jump,)
        cols = self.generators_at(i, j)
        targets = [self.generators_at(i + 1, j + d) for d in jumps]
        nrows = sum(t.size for t in targets)
        if cols.size == 0 or nrows == 0:
            return SparseMat(nrows, cols.size)
        h = i + self.n_minus
        s, t, v = self.edge_coo(theory, (h, h))
        local = self.local_index()
        gi, gj = self.gen_i, self.gen_j
        keep = (gj[s] == j) & (gi[s] == i)
        s, t, v = s[keep], t[keep], v[keep]
        rows = np.full(t.size, -1, dtype=np.int64)
        offset = 0
        for d, tg in zip(jumps, targets):
            hit = gj[t] == j + d
            rows[hit] = local[t[hit]] + offset
            offset += tg.size
        ok = rows >= 0
        return SparseMat(nrows, cols.size, rows[ok], local[s[ok]], self._reduce_values(v[ok]))

    def check_d_squared(self, theory: Theory | None = None) -> bool:
        d = self.matrix(theory)
        return _product_is_zero(d, d, self.ring.characteristic)

    def memory_bytes(self) -> int:
        return int(self.circ.nbytes + self.vpos.nbytes + self.offsets.nbytes + self.vertices.nbytes)


def _popcounts(x: np.ndarray) -> np.ndarray:
    x = np.asarray(x, dtype=np.int64).copy()
    out = np.zeros_like(x)
    while np.any(x):
        out += x & 1
        x >>= 1
    return out


def _to_scipy_free_product(a: SparseMat, b: SparseMat, p: int):
    """Entries of ``a @ b`` as a dict (exact integers, optionally mod p)."""
    from collections import defaultdict

    rows_of_b = defaultdict(list)
    for r, c, v in zip(b.r.tolist(), b.c.tolist(), b.v.tolist()):
        rows_of_b[r].append((c, v))
    out: dict = defaultdict(int)
    for r, c, v in zip(a.r.tolist(), a.c.tolist(), a.v.tolist()):
        for c2, v2 in rows_of_b.get(c, ()):
            out[(r, c2)] += v * v2
    if p:
        return {k: x % p for k, x in out.items() if x % p}
    return {k: x for k, x in out.items() if x}


def _product_is_zero(a: SparseMat, b: SparseMat, p: int) -> bool:
    return not _to_scipy_free_product(a, b, p)


def anticommute(c: "CubeComplex", first: Theory, second: Theory) -> bool:
    """Whether ``d1 d2 + d2 d1`` vanishes on the complex."""
    p = c.ring.characteristic
    a, b = c.matrix(first), c.matrix(second)
    ab = _to_scipy_free_product(a, b, 0)
    ba = _to_scipy_free_product(b, a, 0)
    keys = set(ab) | set(ba)
    for k in keys:
        x = ab.get(k, 0) + ba.get(k, 0)
        if (x % p if p else x):
            return False
    return True


def build_complex(
    d: PlanarDiagram,
    theory: Theory = Theory.KHOVANOV,
    ring: RingTag = QQ,
    heights: tuple[int, int] | None = None,
    fixed: dict[int, int] | None = None,
    signs=None,
) -> CubeComplex:
    """Enumerate the cube of resolutions of ``d`` for ``theory`` over ``ring``.

    ``fixed`` pins some crossings to a smoothing, which gives the cube of the
    partially smoothed diagram; ``signs`` then supplies the crossing signs
    of that diagram under its chosen orientation (entries of pinned
    crossings are ignored).
    """
    check_ring(theory, ring)
    n = d.n_crossings
    fixed = dict(fixed or {})
    free_mask = sum(1 << r for r in range(n) if r not in fixed)
    fixed_bits = sum(1 << r for r, b in fixed.items() if b)
    signs = np.asarray(d.signs if signs is None else signs)
    free = [r for r in range(n) if r not in fixed]
    n_plus = int(sum(1 for r in free if signs[r] > 0))
    n_minus = len(free) - n_plus
    lo, hi = heights if heights is not None else (0, len(free))
    lo, hi = max(lo, 0), min(hi, len(free))
    allv = np.arange(1 << n, dtype=np.int64)
    allv = allv[(allv & ~free_mask) == fixed_bits]
    hv = _popcounts(allv & free_mask)
    vertices = allv[(hv >= lo) & (hv <= hi)]
    vpos = np.full(1 << n, -1, dtype=np.int64)
    vpos[vertices] = np.arange(vertices.size)
    circ, ncirc = all_states(d, vertices)
    counts = np.int64(1) << ncirc
    offsets = np.zeros(vertices.size + 1, dtype=np.int64)
    np.cumsum(counts, out=offsets[1:])
    return CubeComplex(
        d, theory, ring, (lo, hi), vertices, vpos, circ, ncirc, offsets, n_plus, n_minus, free_mask
    )


def nu_chain_map(c: CubeComplex) -> SparseMat:
    """The map replacing one ``X`` label by ``1``, as a matrix (target rows)."""
    if c.ring != GF(2):
        raise RingError("the vertical map is defined over Z2")
    label = c.gen_label
    src, tgt = [], []
    maxc = int(c.ncirc.max()) if c.ncirc.size else 0
    g = np.arange(c.n_gens)
    for b in range(maxc):
        hit = ((label >> b) & 1) == 1
        src.append(g[hit])
        tgt.append(g[hit] - (np.int64(1) << b))
    s = np.concatenate(src) if src else np.zeros(0, np.int64)
    t = np.concatenate(tgt) if tgt else np.zeros(0, np.int64)
    return SparseMat(c.n_gens, c.n_gens, t, s, np.ones(s.size, dtype=np.int64))
