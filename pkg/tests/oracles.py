"""Reference computations that share no code with the package.

Everything here works from the braid word directly.  Loops are traced by
walking a degree-2 graph; integral homology comes from a separately built
dense cube reduced with sympy.

A letter ``k > 0`` closes to a negative crossing.  The Khovanov 0-smoothing
is the Kauffman A-smoothing, which for a negative crossing with both
strands pointing up is the horizontal one (a cap over a cup).
"""

from __future__ import annotations

import itertools
from collections import Counter, defaultdict
from math import gcd

import sympy
from sympy.matrices.normalforms import invariant_factors


def _nodes(letters, strands):
    """Endpoints ``(t, b, side)`` at level ``t``; side 0 is below, 1 above."""
    n = max(len(letters), 1)
    return n, [(t, b, s) for t in range(n) for b in range(strands) for s in (0, 1)]


def _graph(letters, strands, vertex):
    """Adjacency of the smoothed closure; every node has degree two."""
    n, nodes = _nodes(letters, strands)
    adj = defaultdict(list)

    def link(a, b):
        adj[a].append(b)
        adj[b].append(a)

    for t in range(n):
        for b in range(strands):
            link((t, b, 1), ((t + 1) % n, b, 0))
    for t in range(n):
        active = set()
        if letters:
            k = letters[t]
            a = abs(k) - 1
            active = {a, a + 1}
            horizontal_a = k > 0  # negative crossing: A-smoothing is horizontal
            horizontal = horizontal_a if vertex[t] == 0 else not horizontal_a
            if horizontal:
                link((t, a, 0), (t, a + 1, 0))
                link((t, a, 1), (t, a + 1, 1))
            else:
                link((t, a, 0), (t, a, 1))
                link((t, a + 1, 0), (t, a + 1, 1))
        for b in range(strands):
            if b not in active:
                link((t, b, 0), (t, b, 1))
    return nodes, adj


def trace_loops(letters, strands, vertex):
    """Loops of the smoothed closure, each as a frozenset of its nodes."""
    nodes, adj = _graph(list(letters), strands, list(vertex))
    seen, loops = set(), []
    for start in nodes:
        if start in seen:
            continue
        loop, prev, cur = [start], None, start
        seen.add(start)
        while True:
            a, b = adj[cur]
            nxt = b if a == prev else a
            if a == b:  # a two-node loop
                nxt = a
            if nxt == start:
                break
            if nxt in seen:
                break
            seen.add(nxt)
            loop.append(nxt)
            prev, cur = cur, nxt
        loops.append(frozenset(loop))
    return loops


def count_loops(letters, strands, vertex) -> int:
    return len(trace_loops(letters, strands, vertex))


# -- Kauffman bracket ---------------------------------------------------------


def _padd(a, b, scale=1):
    out = dict(a)
    for k, v in b.items():
        out[k] = out.get(k, 0) + scale * v
    return {k: v for k, v in out.items() if v}


def _pmul(a, b):
    out = defaultdict(int)
    for k1, v1 in a.items():
        for k2, v2 in b.items():
            out[k1 + k2] += v1 * v2
    return {k: v for k, v in out.items() if v}


def bracket(letters, strands) -> dict:
    """Unreduced bracket ``sum A^(a-b) d^loops`` as {exponent of A: coeff}."""
    d = {2: -1, -2: -1}
    total: dict = {}
    n = len(letters)
    for vertex in itertools.product((0, 1), repeat=n):
        a = vertex.count(0)
        term = {a - (n - a): 1}
        for _ in range(count_loops(letters, strands, vertex)):
            term = _pmul(term, d)
        total = _padd(total, term)
    return total


def jones_q(letters, strands) -> dict:
    """Unnormalised Jones polynomial in ``q`` from the bracket.

    The writhe factor is ``(-A^3)^(-w)`` and ``A^2 = -q^(-1)``.
    """
    w = sum(1 if k < 0 else -1 for k in letters)
    poly = _pmul(bracket(letters, strands), {-3 * w: (-1) ** (w % 2)})
    out = {}
    for e, c in poly.items():
        assert e % 2 == 0
        half = e // 2
        out[-half] = out.get(-half, 0) + c * (-1) ** (half % 2)
    return {k: v for k, v in out.items() if v}


# -- Smith normal form by determinantal divisors -------------------------------


def determinantal_divisors(rows) -> list[int]:
    """Invariant factors ``D_k / D_(k-1)`` where ``D_k`` is the gcd of k-minors."""
    m = sympy.Matrix(rows)
    if m.rows == 0 or m.cols == 0:
        return []
    divisors = [1]
    for k in range(1, min(m.shape) + 1):
        g = 0
        for rs in itertools.combinations(range(m.rows), k):
            for cs in itertools.combinations(range(m.cols), k):
                g = gcd(g, int(m.extract(list(rs), list(cs)).det()))
        if g == 0:
            break
        divisors.append(g)
    return [divisors[k] // divisors[k - 1] for k in range(1, len(divisors))]


# -- dense Khovanov complex ---------------------------------------------------


def _segments(loop):
    """Inter-level segments of a loop, named by their upper endpoint."""
    return frozenset(x for x in loop if x[2] == 0)


def _state(letters, strands, vertex):
    loops = trace_loops(letters, strands, vertex)
    loops.sort(key=lambda c: min(_segments(c)))
    return [_segments(c) for c in loops]


def khovanov_chain_groups(letters, strands):
    """Generators ``(vertex, labels)`` with their bigradings and differential."""
    n = len(letters)
    n_minus = sum(1 for k in letters if k > 0)
    n_plus = n - n_minus
    states = {v: _state(letters, strands, v) for v in itertools.product((0, 1), repeat=n)}
    gens = []
    for v, circles in states.items():
        h = sum(v)
        for labels in itertools.product((0, 1), repeat=len(circles)):  # 1 means X
            deg = labels.count(0) - labels.count(1)
            gens.append((v, labels, h - n_minus, deg + h + n_plus - 2 * n_minus))
    index = {(g[0], g[1]): k for k, g in enumerate(gens)}
    entries = defaultdict(int)  # (target, source) -> coeff
    for v, circles in states.items():
        for r in range(n):
            if v[r]:
                continue
            u = v[:r] + (1,) + v[r + 1 :]
            sign = (-1) ** sum(v[:r])
            target = states[u]
            old = [c for c in circles if c not in target]
            new = [c for c in target if c not in circles]
            keep = {k: target.index(c) for k, c in enumerate(circles) if c in target}
            for labels in itertools.product((0, 1), repeat=len(circles)):
                base = [None] * len(target)
                for k, t in keep.items():
                    base[t] = labels[k]
                images = []
                if len(old) == 2:  # merge
                    a, b = (labels[circles.index(c)] for c in old)
                    if a + b <= 1:
                        images.append({target.index(new[0]): a + b})
                else:  # split
                    a = labels[circles.index(old[0])]
                    t0, t1 = (target.index(c) for c in new)
                    if a == 0:
                        images += [{t0: 0, t1: 1}, {t0: 1, t1: 0}]
                    else:
                        images.append({t0: 1, t1: 1})
                for img in images:
                    lab = list(base)
                    for t, x in img.items():
                        lab[t] = x
                    entries[(index[(u, tuple(lab))], index[(v, labels)])] += sign
    return gens, dict(entries)


def integral_homology(letters, strands) -> dict:
    """``{(i, j): (rank, sorted torsion)}`` from the dense cube."""
    gens, entries = khovanov_chain_groups(list(letters), strands)
    by = defaultdict(list)
    for k, g in enumerate(gens):
        by[(g[2], g[3])].append(k)

    def block(src, tgt):
        s, t = by.get(src, []), by.get(tgt, [])
        return [[entries.get((a, b), 0) for b in s] for a in t], len(t), len(s)

    def factors(src, tgt):
        rows, nr, nc = block(src, tgt)
        if not nr or not nc:
            return []
        m = sympy.Matrix(rows)
        if m.is_zero_matrix:
            return []
        return [abs(int(x)) for x in invariant_factors(m, domain=sympy.ZZ) if x != 0]

    out = {}
    for (i, j), gs in by.items():
        f_out = factors((i, j), (i + 1, j))
        f_in = factors((i - 1, j), (i, j))
        rank = len(gs) - len(f_out) - len(f_in)
        tors = sorted(x for x in f_in if x > 1)
        if rank or tors:
            out[(i, j)] = (rank, tors)
    return out


def mod_p_dims(table: dict, p: int) -> Counter:
    """Universal coefficients applied to an integral table."""
    out = Counter()
    for (i, j), (rank, tors) in table.items():
        out[(i, j)] += rank
        t = sum(1 for x in tors if x % p == 0)
        out[(i, j)] += t
        out[(i - 1, j)] += t
    return Counter({k: v for k, v in out.items() if v})


# the left trefoil, closure of (s1 s2)^2, computed with the dense cube above
TREFOIL_Z = {
    (0, -1): (1, []),
    (0, -3): (1, []),
    (-2, -5): (1, []),
    (-2, -7): (0, [2]),
    (-3, -9): (1, []),
}
