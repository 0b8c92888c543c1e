"""Planar diagrams of braid closures and their Kauffman states.

The closure of a word of length ``n`` on ``s`` strands is cut into levels
``0..n-1``; point ``t*s + a`` is position ``a`` just below letter ``t``
(level ``n`` is glued back to level 0).  Points joined by a strand that
passes a letter without crossing are merged, and the resulting classes are
the arcs, numbered by their smallest point.

Each crossing stores its arc-ends as ``(bl, br, tl, tr)``.  The vertical
smoothing joins ``bl-tl`` and ``br-tr`` (the oriented one, since every strand
runs upward); the horizontal smoothing joins ``bl-br`` and ``tl-tr``.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

import numpy as np

from . import _accel
from ._accel import njit
from .braid import BraidWord

DEFAULT_CONVENTION = "standard"
CONVENTIONS = ("standard", "flipped")


class _DSU:
    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, x: int) -> int:
        p = self.parent
        while p[x] != x:
            p[x] = p[p[x]]
            x = p[x]
        return x

    def union(self, a: int, b: int) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            if ra < rb:
                self.parent[rb] = ra
            else:
                self.parent[ra] = rb


def _classes(n: int, pairs) -> list[int]:
    """Class id of each of ``n`` items under ``pairs``, ordered by smallest member."""
    dsu = _DSU(n)
    for a, b in pairs:
        dsu.union(a, b)
    ids: dict[int, int] = {}
    out = []
    for x in range(n):
        r = dsu.find(x)
        if r not in ids:
            ids[r] = len(ids)
        out.append(ids[r])
    return out


@dataclass(frozen=True)
class PlanarDiagram:
    word: BraidWord
    convention: str
    n_arcs: int
    crossings: np.ndarray  # (n, 4) arc indices bl, br, tl, tr
    letter_signs: np.ndarray  # (n,) sign of the braid letter
    signs: np.ndarray  # (n,) crossing sign under upward orientation
    vertical_bit: np.ndarray  # (n,) smoothing bit that gives the vertical smoothing
    arc_component: np.ndarray  # (n_arcs,) link component of each arc
    n_components: int

    @property
    def n_crossings(self) -> int:
        return int(self.crossings.shape[0])

    @property
    def n_plus(self) -> int:
        return int(np.count_nonzero(self.signs > 0))

    @property
    def n_minus(self) -> int:
        return int(np.count_nonzero(self.signs < 0))

    @property
    def writhe(self) -> int:
        return int(self.signs.sum())

    def crossing_components(self) -> list[tuple[int, int]]:
        """Components of the two strands meeting at each crossing."""
        comp = self.arc_component
        return [(int(comp[bl]), int(comp[br])) for bl, br, _, _ in self.crossings]

    def to_json(self) -> dict:
        return {
            "strands": self.word.strands,
            "letters": list(self.word.letters),
            "convention": self.convention,
            "arcs": self.n_arcs,
            "crossings": [
                {"ends": [int(x) for x in c], "sign": int(s)}
                for c, s in zip(self.crossings, self.signs)
            ],
            "arc_component": [int(x) for x in self.arc_component],
        }


def braid_closure(w: BraidWord, convention: str = DEFAULT_CONVENTION) -> PlanarDiagram:
    """Oriented diagram of the closure of ``w``.

    Under the ``standard`` convention a positive letter closes to a negative
    crossing; ``flipped`` reverses this.
    """
    if convention not in CONVENTIONS:
        raise ValueError(f"unknown sign convention {convention!r}")
    s, n = w.strands, len(w.letters)
    levels = max(n, 1)
    npts = levels * s

    def pt(t: int, a: int) -> int:
        return (t % levels) * s + a

    through = []
    ends = []
    for t, k in enumerate(w.letters):
        a = abs(k) - 1
        ends.append((pt(t, a), pt(t, a + 1), pt(t + 1, a), pt(t + 1, a + 1)))
        for b in range(s):
            if b != a and b != a + 1:
                through.append((pt(t, b), pt(t + 1, b)))
    arc_of_pt = _classes(npts, through)
    n_arcs = max(arc_of_pt) + 1 if npts else 0
    crossings = np.array([[arc_of_pt[x] for x in e] for e in ends], dtype=np.int64).reshape(n, 4)

    # strands continue bl -> tr and br -> tl
    comp_pairs = [(c[0], c[3]) for c in crossings] + [(c[1], c[2]) for c in crossings]
    arc_component = np.array(_classes(n_arcs, comp_pairs), dtype=np.int64)
    letter_signs = np.array([1 if k > 0 else -1 for k in w.letters], dtype=np.int64)
    signs = -letter_signs if convention == "standard" else letter_signs.copy()
    # the vertical smoothing is the 0-smoothing of a positive crossing and
    # the 1-smoothing of a negative one
    vertical_bit = (signs < 0).astype(np.int64)
    return PlanarDiagram(
        word=w,
        convention=convention,
        n_arcs=n_arcs,
        crossings=crossings,
        letter_signs=letter_signs,
        signs=signs,
        vertical_bit=vertical_bit,
        arc_component=arc_component,
        n_components=int(arc_component.max()) + 1 if n_arcs else 0,
    )


@dataclass(frozen=True)
class KauffmanState:
    vertex: tuple[int, ...]
    n_circles: int
    arc_circle: tuple[int, ...]

    @property
    def height(self) -> int:
        return sum(self.vertex)


def _smoothing_pairs(d: PlanarDiagram, vertex) -> list[tuple[int, int]]:
    pairs = []
    for (bl, br, tl, tr), vb, bit in zip(d.crossings, d.vertical_bit, vertex):
        if bit == vb:
            pairs += [(bl, tl), (br, tr)]
        else:
            pairs += [(bl, br), (tl, tr)]
    return pairs


def resolve(d: PlanarDiagram, vertex) -> KauffmanState:
    """Resolve every crossing by the bit given in ``vertex``.

    ``vertex`` is a bit sequence or an int whose bit ``r`` is crossing ``r``.
    Circles are numbered by their smallest arc.
    """
    n = d.n_crossings
    if isinstance(vertex, (int, np.integer)):
        vertex = tuple((int(vertex) >> r) & 1 for r in range(n))
    vertex = tuple(int(b) for b in vertex)
    if len(vertex) != n:
        raise ValueError(f"vertex has length {len(vertex)}, diagram has {n} crossings")
    if any(b not in (0, 1) for b in vertex):
        raise ValueError("vertex entries must be 0 or 1")
    assign = _classes(d.n_arcs, _smoothing_pairs(d, vertex))
    return KauffmanState(vertex, (max(assign) + 1) if assign else 0, tuple(assign))


def linking_numbers(d: PlanarDiagram) -> np.ndarray:
    """Pairwise linking numbers of the closure's components."""
    k = d.n_components
    twice = np.zeros((k, k), dtype=np.int64)
    for (a, b), sgn in zip(d.crossing_components(), d.signs):
        if a != b:
            twice[a, b] += sgn
            twice[b, a] += sgn
    if np.any(twice % 2):
        raise AssertionError("odd signed crossing count between components")
    return twice // 2


def component_subsets_gradings(d: PlanarDiagram) -> list[int]:
    """Homological grading 2*sum lk(E, E^c) for every subset E of components."""
    lk = linking_numbers(d)
    k = d.n_components
    out = []
    for size in range(k + 1):
        for sub in combinations(range(k), size):
            inside = set(sub)
            total = sum(int(lk[a, b]) for a in inside for b in range(k) if b not in inside)
            out.append(2 * total)
    return out


# -- all states at once ------------------------------------------------------


@njit
def _states_numba(cross, vbit, n_arcs, vertices):
    nv = vertices.shape[0]
    n = cross.shape[0]
    circ = np.empty((nv, n_arcs), dtype=np.int16)
    ncirc = np.empty(nv, dtype=np.int64)
    parent = np.empty(n_arcs, dtype=np.int64)
    for idx in range(nv):
        v = vertices[idx]
        for a in range(n_arcs):
            parent[a] = a
        for r in range(n):
            bit = (v >> r) & 1
            if bit == vbit[r]:
                x0, y0, x1, y1 = cross[r, 0], cross[r, 2], cross[r, 1], cross[r, 3]
            else:
                x0, y0, x1, y1 = cross[r, 0], cross[r, 1], cross[r, 2], cross[r, 3]
            for x, y in ((x0, y0), (x1, y1)):
                while parent[x] != x:
                    parent[x] = parent[parent[x]]
                    x = parent[x]
                while parent[y] != y:
                    parent[y] = parent[parent[y]]
                    y = parent[y]
                if x < y:
                    parent[y] = x
                elif y < x:
                    parent[x] = y
        count = 0
        for a in range(n_arcs):
            x = a
            while parent[x] != x:
                x = parent[x]
            if x == a:
                circ[idx, a] = count
                count += 1
            else:
                circ[idx, a] = circ[idx, x]
        ncirc[idx] = count
    return circ, ncirc


def _states_numpy(cross, vbit, n_arcs, vertices):
    nv = vertices.shape[0]
    n = cross.shape[0]
    lab = np.broadcast_to(np.arange(n_arcs, dtype=np.int64), (nv, n_arcs)).copy()
    rows = np.arange(nv)[:, None]
    pairs = []
    for r in range(n):
        vert = ((vertices >> r) & 1) == vbit[r]
        bl, br, tl, tr = (int(x) for x in cross[r])
        pairs.append((np.full(nv, bl), np.where(vert, tl, br)))
        pairs.append((np.where(vert, br, tl), np.full(nv, tr)))
    flat = np.arange(nv)
    while True:
        before = lab.copy()
        for xs, ys in pairs:
            lx, ly = lab[flat, xs], lab[flat, ys]
            m = np.minimum(lx, ly)
            # hook the larger root under the smaller one, then compress
            lab[flat, lx] = np.minimum(lab[flat, lx], m)
            lab[flat, ly] = np.minimum(lab[flat, ly], m)
            lab[flat, xs] = m
            lab[flat, ys] = m
        lab = lab[rows, lab]
        if np.array_equal(lab, before):
            break
    roots = lab == np.arange(n_arcs)
    ids = np.cumsum(roots, axis=1) - 1
    circ = ids[rows, lab].astype(np.int16)
    return circ, roots.sum(axis=1).astype(np.int64)


def all_states(d: PlanarDiagram, vertices: np.ndarray | None = None):
    """Circle assignment ``(V, n_arcs)`` and circle counts for many vertices."""
    n = d.n_crossings
    if vertices is None:
        vertices = np.arange(1 << n, dtype=np.int64)
    vertices = np.ascontiguousarray(vertices, dtype=np.int64)
    if d.n_arcs == 0:
        return np.zeros((len(vertices), 0), dtype=np.int16), np.zeros(len(vertices), dtype=np.int64)
    fn = _states_numba if _accel.numba_enabled() else _states_numpy
    return fn(d.crossings, d.vertical_bit, d.n_arcs, vertices)
