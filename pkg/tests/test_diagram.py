import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from conftest import word
from khtorsion.diagram import (
    all_states,
    braid_closure,
    component_subsets_gradings,
    linking_numbers,
    resolve,
)


def test_delta_crossing_signs():
    d = braid_closure(word("D"))
    assert (d.n_minus, d.n_plus) == (3, 0)
    assert d.writhe == -3


def test_empty_word_is_unlink():
    d = braid_closure(word("", 2))
    assert d.n_crossings == 0 and d.n_components == 2


def test_opposite_letters():
    d = braid_closure(word("1 -1", 2))
    assert d.n_plus == d.n_minus == 1


def test_flipped_convention_negates_signs():
    w = word("1 -2 1")
    assert list(braid_closure(w, "flipped").signs) == [-s for s in braid_closure(w).signs]
    with pytest.raises(ValueError):
        braid_closure(w, "sideways")


def test_single_crossing_states():
    # the 0-smoothing of this negative crossing is the horizontal one
    d = braid_closure(word("1", 2))
    assert resolve(d, (0,)).n_circles == 1
    assert resolve(d, (1,)).n_circles == 2


def test_resolve_validates():
    d = braid_closure(word("1 2", 3))
    with pytest.raises(ValueError):
        resolve(d, (0,))
    with pytest.raises(ValueError):
        resolve(d, (0, 2))


def test_full_twist_all_ones_matches_tracing():
    w = word("D^2")
    d = braid_closure(w)
    ones = (1,) * 6
    assert resolve(d, ones).n_circles == oracles.count_loops(w.letters, 3, ones)


@pytest.mark.parametrize("text, strands", [("D^2", 3), ("1 -2 1 -2", 3), ("1 1 1", 2), ("1 2 3 -1", 4)])
def test_every_state_matches_tracing(text, strands):
    w = word(text, strands)
    d = braid_closure(w)
    _, counts = all_states(d)
    for v in range(1 << d.n_crossings):
        bits = tuple((v >> r) & 1 for r in range(d.n_crossings))
        expect = oracles.count_loops(w.letters, strands, bits)
        assert resolve(d, v).n_circles == expect == counts[v]


letters = st.integers(1, 3).flatmap(lambda a: st.sampled_from([a, -a]))


@settings(max_examples=60, deadline=None)
@given(st.lists(letters, min_size=1, max_size=7))
def test_random_states_match_tracing(ls):
    d = braid_closure(word(" ".join(map(str, ls)), 4))
    for v in np.random.default_rng(len(ls)).integers(0, 1 << len(ls), size=8):
        bits = tuple((int(v) >> r) & 1 for r in range(len(ls)))
        assert resolve(d, int(v)).n_circles == oracles.count_loops(ls, 4, bits)


def _signed_count_oracle(letters, strands):
    """Half the signed crossings between each pair of permutation cycles."""
    at = list(range(strands))
    pairs = []
    for k in letters:
        a = abs(k) - 1
        pairs.append((at[a], at[a + 1], -1 if k > 0 else 1))
        at[a], at[a + 1] = at[a + 1], at[a]
    perm = {s: at.index(s) for s in range(strands)}  # bottom strand -> top position
    comp = {}
    for s in range(strands):
        if s in comp:
            continue
        x, c = s, len(set(comp.values()))
        while x not in comp:
            comp[x] = c
            x = perm[x]
    total = {}
    for a, b, sgn in pairs:
        ca, cb = comp[a], comp[b]
        if ca != cb:
            key = tuple(sorted((ca, cb)))
            total[key] = total.get(key, 0) + sgn
    return {k: v // 2 for k, v in total.items()}


def test_linking_numbers():
    assert linking_numbers(braid_closure(word("", 2))).tolist() == [[0, 0], [0, 0]]
    lk = linking_numbers(braid_closure(word("D")))
    assert lk[0, 1] == -1 == _signed_count_oracle((1, 2, 1), 3)[(0, 1)]
    lk = linking_numbers(braid_closure(word("D^2")))
    assert all(lk[a, b] == -1 for a, b in itertools.combinations(range(3), 2))
    assert sorted(_signed_count_oracle((1, 2, 1) * 2, 3).values()) == [-1, -1, -1]
    g = component_subsets_gradings(braid_closure(word("D^2")))
    assert g.count(-4) == 6 and g.count(0) == 2
