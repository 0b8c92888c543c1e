import functools
import os
import sys

import pytest

sys.path.insert(0, os.path.dirname(__file__))

from khtorsion.braid import parse_braid_word  # noqa: E402
from khtorsion.homology import homology_of_word  # noqa: E402
from khtorsion.linalg import ZZ, parse_ring  # noqa: E402


def word(text: str, strands: int = 3):
    return parse_braid_word(text, strands)


@functools.cache
def kh(text: str, strands: int = 3, ring: str = "Z"):
    """Memoised homology, shared across test modules."""
    return homology_of_word(word(text, strands), parse_ring(ring))


@pytest.fixture(autouse=True)
def _isolated_cache(tmp_path, monkeypatch):
    monkeypatch.setenv("KH_CACHE_DIR", str(tmp_path / "cache"))


ACCEPTANCE_LINES: dict[int, str] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[k])
