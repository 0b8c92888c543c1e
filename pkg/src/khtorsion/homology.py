"""Bigraded Khovanov homology over fields and the integers, plus checks.

Homology is assembled block by block: the Khovanov differential preserves
the quantum grading, so each matrix ``d^{i,j}`` is handled on its own.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field

import numpy as np

from .braid import BraidWord, mirror
from .complex import CubeComplex, Theory, build_complex
from .diagram import DEFAULT_CONVENTION, PlanarDiagram, braid_closure
from .linalg import GF, QQ, ZZ, RingError, RingTag, prime_power_factors, rank, smith_normal_form

Bigrading = tuple[int, int]


@dataclass(frozen=True)
class FieldTable:
    """Dimensions of homology over a field, keyed by (i, j)."""

    field: RingTag
    table: dict = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "table", {k: int(v) for k, v in sorted(self.table.items()) if v})

    def __getitem__(self, key: Bigrading) -> int:
        return self.table.get(key, 0)

    def total(self) -> int:
        return sum(self.table.values())

    def by_i(self) -> dict[int, int]:
        out: dict[int, int] = defaultdict(int)
        for (i, _), d in self.table.items():
            out[i] += d
        return dict(sorted(out.items()))

    def shift(self, di: int = 0, dj: int = 0) -> "FieldTable":
        """``[di]{dj}``: the entry at (i, j) moves to (i + di, j + dj)."""
        return FieldTable(self.field, {(i + di, j + dj): v for (i, j), v in self.table.items()})

    def __add__(self, other: "FieldTable") -> "FieldTable":
        out = defaultdict(int, self.table)
        for k, v in other.table.items():
            out[k] += v
        return FieldTable(self.field, dict(out))

    def __eq__(self, other) -> bool:
        return isinstance(other, FieldTable) and self.table == other.table

    def to_json(self) -> dict:
        return {
            "field": str(self.field),
            "groups": [{"i": i, "j": j, "dim": d} for (i, j), d in self.table.items()],
        }


@dataclass(frozen=True)
class BigradedGroup:
    """Integral homology: free rank and prime-power torsion per bigrading."""

    table: dict = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for k, (rk, tors) in sorted(self.table.items()):
            tors = tuple(sorted(int(t) for t in tors))
            if rk or tors:
                clean[k] = (int(rk), tors)
        object.__setattr__(self, "table", clean)

    def rank(self, i: int, j: int) -> int:
        return self.table.get((i, j), (0, ()))[0]

    def torsion(self, i: int, j: int) -> tuple[int, ...]:
        return self.table.get((i, j), (0, ()))[1]

    def free_table(self) -> FieldTable:
        return FieldTable(QQ, {k: v[0] for k, v in self.table.items()})

    def torsion_values(self) -> list[int]:
        return sorted(t for _, tors in self.table.values() for t in tors)

    def p_torsion_count(self, p: int, i: int, j: int) -> int:
        return sum(1 for t in self.torsion(i, j) if t % p == 0)

    def reduce_mod(self, p: int) -> FieldTable:
        """Field dimensions predicted by universal coefficients."""
        out: dict = defaultdict(int)
        for (i, j), (rk, tors) in self.table.items():
            t = sum(1 for x in tors if x % p == 0)
            out[(i, j)] += rk + t
            out[(i - 1, j)] += t
        return FieldTable(GF(p), dict(out))

    def shift(self, di: int = 0, dj: int = 0) -> "BigradedGroup":
        return BigradedGroup({(i + di, j + dj): v for (i, j), v in self.table.items()})

    def __add__(self, other: "BigradedGroup") -> "BigradedGroup":
        out: dict = {}
        for src in (self.table, other.table):
            for k, (rk, tors) in src.items():
                r0, t0 = out.get(k, (0, ()))
                out[k] = (r0 + rk, t0 + tors)
        return BigradedGroup(out)

    def __eq__(self, other) -> bool:
        return isinstance(other, BigradedGroup) and self.table == other.table

    def to_json(self) -> dict:
        return {
            "groups": [
                {"i": i, "j": j, "rank": rk, "torsion": list(tors)}
                for (i, j), (rk, tors) in self.table.items()
            ]
        }

    @classmethod
    def from_json(cls, data: dict) -> "BigradedGroup":
        return cls({(g["i"], g["j"]): (g["rank"], tuple(g["torsion"])) for g in data["groups"]})


@dataclass(frozen=True)
class LaurentPoly:
    coeffs: dict = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "coeffs", {int(k): int(v) for k, v in sorted(self.coeffs.items()) if v})

    def __add__(self, other):
        out = defaultdict(int, self.coeffs)
        for k, v in other.coeffs.items():
            out[k] += v
        return LaurentPoly(dict(out))

    def __mul__(self, other):
        out: dict = defaultdict(int)
        for a, x in self.coeffs.items():
            for b, y in other.coeffs.items():
                out[a + b] += x * y
        return LaurentPoly(dict(out))

    def __eq__(self, other) -> bool:
        return isinstance(other, LaurentPoly) and self.coeffs == other.coeffs

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for e, c in sorted(self.coeffs.items(), reverse=True):
            mono = "" if e == 0 else ("q" if e == 1 else f"q^{e}")
            num = str(abs(c)) if (abs(c) != 1 or not mono) else ""
            parts.append(("-" if c < 0 else "+") + num + mono)
        s = "".join(parts)
        return s[1:] if s.startswith("+") else s

    def to_json(self) -> dict:
        return {str(k): v for k, v in self.coeffs.items()}


# -- computation ---------------------------------------------------------------


def _valid_i_range(c: CubeComplex) -> tuple[int, int]:
    """Homological gradings whose homology the (possibly truncated) cube determines."""
    lo, hi = c.heights
    top = bin(c.free_mask).count("1")
    if lo > 0:
        lo += 1
    if hi < top:
        hi -= 1
    return lo - c.n_minus, hi - c.n_minus


def _j_values(c: CubeComplex, i: int) -> list[int]:
    return sorted({j for (ii, j) in c.bigradings() if ii == i})


def _block_ranks(c: CubeComplex, ring: RingTag, i_range: tuple[int, int]):
    """rank (or Smith data over the integers) of d^{i,j} for i in range."""
    out = {}
    for i in range(i_range[0], i_range[1] + 1):
        for j in _j_values(c, i):
            m = c.differential_block(i, j, theory=Theory.KHOVANOV)
            if m.nnz == 0:
                out[(i, j)] = (0, ()) if ring.kind == "Z" else 0
            elif ring.kind == "Z":
                snf = smith_normal_form(m)
                out[(i, j)] = (snf.rank, snf.torsion)
            else:
                out[(i, j)] = rank(m, ring)
    return out


def field_homology(c: CubeComplex, field: RingTag | None = None) -> FieldTable:
    """Dimensions of Khovanov homology over a field."""
    field = field or c.ring
    if not field.is_field:
        raise RingError("field_homology needs a field; use integral_homology")
    if c.theory is not Theory.KHOVANOV:
        raise RingError("homology of filtered theories goes through the spectral module")
    if c.ring.kind == "p" and field != c.ring:
        raise RingError("complex was built over a different field")
    lo, hi = _valid_i_range(c)
    ranks = _block_ranks(c, field, (lo - 1, hi))
    table = {}
    for i in range(lo, hi + 1):
        for j in _j_values(c, i):
            dim = c.dim(i, j) - ranks.get((i, j), 0) - ranks.get((i - 1, j), 0)
            if dim:
                table[(i, j)] = dim
    return FieldTable(field, table)


def integral_homology(c: CubeComplex) -> BigradedGroup:
    """Khovanov homology over the integers via Smith normal forms."""
    if c.theory is not Theory.KHOVANOV:
        raise RingError("integral homology is defined for the Khovanov theory")
    if c.ring.kind != "Z":
        raise RingError("build the complex over Z for integral homology")
    lo, hi = _valid_i_range(c)
    data = _block_ranks(c, ZZ, (lo - 1, hi))
    table = {}
    for i in range(lo, hi + 1):
        for j in _j_values(c, i):
            r_out = data.get((i, j), (0, ()))[0]
            r_in, tors = data.get((i - 1, j), (0, ()))
            free = c.dim(i, j) - r_out - r_in
            parts = tuple(q for t in tors for q in prime_power_factors(t))
            if free or parts:
                table[(i, j)] = (free, parts)
    return BigradedGroup(table)


def homology_of_word(
    w: BraidWord,
    ring: RingTag = ZZ,
    convention: str = DEFAULT_CONVENTION,
    i_range: tuple[int, int] | None = None,
):
    """Khovanov homology of a braid closure (optionally only some gradings)."""
    d = braid_closure(w, convention)
    heights = None
    if i_range is not None:
        heights = (i_range[0] + d.n_minus - 1, i_range[1] + d.n_minus + 1)
    c = build_complex(d, Theory.KHOVANOV, ring, heights=heights)
    if ring.kind == "Z":
        return integral_homology(c)
    return field_homology(c, ring)


def jones_polynomial(h) -> LaurentPoly:
    """Graded Euler characteristic ``sum (-1)^i q^j rank``."""
    table = h.free_table().table if isinstance(h, BigradedGroup) else h.table
    out: dict = defaultdict(int)
    for (i, j), rk in table.items():
        out[j] += (-1) ** (i % 2) * rk
    return LaurentPoly(dict(out))


# -- consistency checks -------------------------------------------------------


@dataclass
class Report:
    name: str
    ok: bool
    violations: list = field(default_factory=list)
    details: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {"check": self.name, "ok": self.ok, "violations": self.violations, **self.details}


def uct_check(z: BigradedGroup, f: FieldTable) -> Report:
    """Compare mod-p dimensions with free ranks plus p-torsion at i and i+1."""
    p = f.field.characteristic
    if not p:
        expected = z.free_table()
    else:
        expected = z.reduce_mod(p)
    keys = set(expected.table) | set(f.table)
    bad = [
        {"i": i, "j": j, "expected": expected[(i, j)], "found": f[(i, j)]}
        for (i, j) in sorted(keys)
        if expected[(i, j)] != f[(i, j)]
    ]
    return Report("uct", not bad, bad)


def mirror_duality_check(w: BraidWord, field: RingTag, convention: str = DEFAULT_CONVENTION) -> Report:
    """Field homology of the mirror equals the original reflected through the origin."""
    a = homology_of_word(w, field, convention)
    b = homology_of_word(mirror(w), field, convention)
    reflected = {(-i, -j): v for (i, j), v in a.table.items()}
    keys = set(reflected) | set(b.table)
    bad = [
        {"i": i, "j": j, "mirror": b[(i, j)], "reflected": reflected.get((i, j), 0)}
        for (i, j) in sorted(keys)
        if b[(i, j)] != reflected.get((i, j), 0)
    ]
    return Report("mirror_duality", not bad, bad)


def smoothing_orientation(d: PlanarDiagram, r: int, bit: int) -> np.ndarray:
    """Crossing signs of the diagram with crossing ``r`` smoothed by ``bit``.

    The vertical smoothing keeps the braid orientation.  After a horizontal
    smoothing each component is oriented to agree with the braid on its
    lowest arc.
    """
    if bit == d.vertical_bit[r]:
        return d.signs.copy()
    bl, br, tl, tr = (int(x) for x in d.crossings[r])
    adj: dict[int, list[tuple[int, int]]] = defaultdict(list)

    def link(a, b, flip):
        adj[a].append((b, flip))
        adj[b].append((a, flip))

    for k, (a0, a1, a2, a3) in enumerate(d.crossings):
        if k == r:
            link(bl, br, 1)
            link(tl, tr, 1)
        else:
            link(int(a0), int(a3), 0)
            link(int(a1), int(a2), 0)
    ori = [0] * d.n_arcs
    for start in range(d.n_arcs):
        if ori[start]:
            continue
        ori[start] = 1
        stack = [start]
        while stack:
            a = stack.pop()
            for b, flip in adj[a]:
                want = -ori[a] if flip else ori[a]
                if ori[b] == 0:
                    ori[b] = want
                    stack.append(b)
                elif ori[b] != want:
                    raise AssertionError("inconsistent orientation")
    signs = d.signs.copy()
    for k, (a0, a1, _, _) in enumerate(d.crossings):
        if k != r:
            signs[k] = d.signs[k] * ori[int(a0)] * ori[int(a1)]
    return signs


def smoothed_homology(d: PlanarDiagram, r: int, bit: int, field: RingTag) -> FieldTable:
    signs = smoothing_orientation(d, r, bit)
    c = build_complex(d, Theory.KHOVANOV, field, fixed={r: bit}, signs=signs)
    return field_homology(c, field)


def les_consistency(w: BraidWord, r: int, field: RingTag, convention: str = DEFAULT_CONVENTION) -> Report:
    """Euler-characteristic test of the smoothing long exact sequence.

    For each quantum grading the alternating sum of dimensions along the
    sequence must vanish.
    """
    d = braid_closure(w, convention)
    if not 0 <= r < d.n_crossings:
        raise ValueError(f"crossing index {r} out of range")
    hd = field_homology(build_complex(d, Theory.KHOVANOV, field), field)
    h0 = smoothed_homology(d, r, 0, field)
    h1 = smoothed_homology(d, r, 1, field)
    s0 = smoothing_orientation(d, r, 0)
    s1 = smoothing_orientation(d, r, 1)

    def nminus(signs):
        return int(sum(1 for k in range(d.n_crossings) if k != r and signs[k] < 0))

    negative = d.signs[r] < 0
    if negative:
        c = nminus(s0) - d.n_minus

        def terms(i, j):
            return h1[(i, j + 1)], hd[(i, j)], h0[(i - c, j - 3 * c - 1)]
    else:
        c = nminus(s1) - d.n_minus

        def terms(i, j):
            return h1[(i - c - 1, j - 3 * c - 2)], hd[(i, j)], h0[(i, j - 1)]

    ivals = [i for (i, _) in hd.table] + [i for (i, _) in h0.table] + [i for (i, _) in h1.table]
    jvals = [j for (_, j) in hd.table] + [j for (_, j) in h0.table] + [j for (_, j) in h1.table]
    span = max(abs(c) + 2, 2)
    ilo, ihi = min(ivals, default=0) - span, max(ivals, default=0) + span
    jlo, jhi = min(jvals, default=0) - 3 * span - 4, max(jvals, default=0) + 3 * span + 4
    bad = []
    for j in range(jlo, jhi + 1):
        total = 0
        for i in range(ilo, ihi + 1):
            a, b, cc = terms(i, j)
            total += (-1) ** (i % 2) * (a - b + cc)
        if total:
            bad.append({"j": j, "alternating_sum": total})
    return Report(
        "les",
        not bad,
        bad,
        {"crossing": r, "sign": int(d.signs[r]), "c": c},
    )


def torsion_primes(z: BigradedGroup) -> list[int]:
    primes = set()
    for t in z.torsion_values():
        primes.add(prime_power_factors(t)[0] if t > 1 else t)
    out = []
    for q in primes:
        f = 2
        while q % f:
            f += 1
        out.append(f)
    return sorted(set(out))


def tables_equal(a, b) -> bool:
    """Equality of two tables given as dicts or as table objects."""
    return dict(getattr(a, "table", a)) == dict(getattr(b, "table", b))
