import pytest

from conftest import word
from khtorsion import _accel
from khtorsion.complex import Theory
from khtorsion.homology import homology_of_word
from khtorsion.linalg import GF, QQ, ZZ
from khtorsion.spectral import spectral_of_word


def test_flag(monkeypatch):
    monkeypatch.setenv("KH_NUMBA", "0")
    assert not _accel.numba_enabled()
    monkeypatch.setenv("KH_NUMBA", "off")
    assert not _accel.numba_enabled()
    monkeypatch.setenv("KH_NUMBA", "1")
    assert _accel.numba_enabled() == _accel.HAVE_NUMBA


def _run(monkeypatch, flag, text):
    monkeypatch.setenv("KH_NUMBA", flag)
    w = word(text)
    return (
        homology_of_word(w, ZZ),
        homology_of_word(w, GF(2)),
        homology_of_word(w, QQ),
        [p.table for p in spectral_of_word(w, Theory.TURNER, GF(2))],
    )


@pytest.mark.parametrize("text", ["1 2 1 2 1 2 1 2", "D^2 2", "D^2 -1 2 -1"])
def test_backends_give_identical_results(monkeypatch, text):
    assert _run(monkeypatch, "1", text) == _run(monkeypatch, "0", text)
