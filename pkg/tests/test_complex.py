import numpy as np
import pytest

from conftest import word
from khtorsion.complex import Theory, anticommute, build_complex, check_ring, nu_chain_map
from khtorsion.diagram import braid_closure
from khtorsion.homology import field_homology
from khtorsion.linalg import GF, QQ, ZZ, RingError


def cube(text, strands=3, theory=Theory.KHOVANOV, ring=ZZ, **kw):
    return build_complex(braid_closure(word(text, strands)), theory, ring, **kw)


def test_unknot_generators():
    c = cube("", 1)
    assert sorted(zip(c.gen_i.tolist(), c.gen_j.tolist())) == [(0, -1), (0, 1)]
    assert c.matrix().nnz == 0
    assert c.differential_block(0, 1).rows == 0


def test_single_crossing_blocks():
    c = cube("1", 2)
    assert c.bigradings() == [(-1, -3), (-1, -1), (0, -3), (0, -1), (0, 1)]
    # a split: 1 -> 1(x)X + X(x)1 and X -> X(x)X
    b = c.differential_block(-1, -1).to_dense()
    assert b.shape == (2, 1) and sorted(abs(x) for x in b[:, 0]) == [1, 1]
    assert c.differential_block(-1, -3).to_dense().tolist() in ([[1]], [[-1]])
    assert c.differential_block(0, 1).rows == 0


def test_nu_on_three_circles():
    c = cube("", 3, ring=GF(2))
    nu = nu_chain_map(c)
    top = int(np.flatnonzero(c.gen_label == 7)[0])
    images = sorted(int(c.gen_label[r]) for (r, s) in nu.entries if s == top)
    assert images == [3, 5, 6]
    bottom = int(np.flatnonzero(c.gen_label == 0)[0])
    assert not any(s == bottom for (_, s) in nu.entries)


def test_nu_needs_z2():
    with pytest.raises(RingError):
        nu_chain_map(cube("1 1", 2, ring=QQ))


@pytest.mark.parametrize(
    "theory, ring",
    [
        (Theory.KHOVANOV, ZZ),
        (Theory.KHOVANOV, GF(3)),
        (Theory.LEE, QQ),
        (Theory.LEE, GF(5)),
        (Theory.TURNER, GF(2)),
        (Theory.BARNATAN_F2, GF(2)),
    ],
)
@pytest.mark.parametrize("text", ["D^2", "1 -2 1 -2", "D 2 2 -1"])
def test_d_squared(theory, ring, text):
    assert cube(text, theory=theory, ring=ring).check_d_squared()


def test_anticommutation():
    c = cube("D^2", ring=GF(2))
    assert anticommute(c, Theory.KHOVANOV, Theory.TURNER)
    c = cube("D^2", ring=QQ)
    assert anticommute(c, Theory.KHOVANOV, Theory.LEE)


@pytest.mark.parametrize(
    "theory, ring",
    [(Theory.LEE, GF(2)), (Theory.LEE, ZZ), (Theory.TURNER, QQ), (Theory.BARNATAN_F2, GF(3))],
)
def test_ring_checks(theory, ring):
    with pytest.raises(RingError):
        check_ring(theory, ring)


def test_differential_degrees():
    c = cube("D^2 2", ring=GF(2))
    for theory, dj in [(Theory.KHOVANOV, 0), (Theory.TURNER, 2)]:
        s, t, _ = c.edge_coo(theory)
        assert np.all(c.gen_i[t] == c.gen_i[s] + 1)
        assert np.all(c.gen_j[t] == c.gen_j[s] + dj)


def test_truncated_cube_keeps_interior_homology():
    d = braid_closure(word("D^2"))
    full = field_homology(build_complex(d, Theory.KHOVANOV, GF(2)), GF(2))
    part = field_homology(build_complex(d, Theory.KHOVANOV, GF(2), heights=(1, 4)), GF(2))
    assert part.table
    for (i, j), v in part.table.items():
        assert full[(i, j)] == v
    for (i, j), v in full.table.items():
        if 2 - 6 <= i <= 3 - 6:
            assert part[(i, j)] == v


def test_numba_and_numpy_edges_agree(monkeypatch):
    out = {}
    for flag in ("1", "0"):
        monkeypatch.setenv("KH_NUMBA", flag)
        c = cube("D^2 -1 2", ring=GF(2))
        out[flag] = {th: sorted(zip(*[a.tolist() for a in c.edge_coo(th)])) for th in (Theory.KHOVANOV, Theory.TURNER)}
    assert out["1"] == out["0"]
