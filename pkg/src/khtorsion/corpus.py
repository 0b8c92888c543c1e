"""Named braid closures used by the verification suites."""

from __future__ import annotations

from dataclasses import dataclass

from .braid import BraidWord, MurasugiClass, murasugi_word, parse_braid_word


@dataclass(frozen=True)
class Link:
    name: str
    text: str
    strands: int

    @property
    def word(self) -> BraidWord:
        return parse_braid_word(self.text, self.strands)

    @property
    def crossings(self) -> int:
        return len(self.word.letters)


def torus_3(q: int) -> Link:
    return Link(f"T(3,{q})", " ".join(["1 2"] * q), 3)


# links small enough for every page and induced-map check
CORPUS = (
    Link("unknot", "", 1),
    Link("unlink2", "", 2),
    Link("unlink3", "", 3),
    Link("unknot_s1", "1", 2),
    Link("hopf", "1 1", 2),
    Link("hopf_pos", "-1 -1", 2),
    Link("trefoil_2", "1 1 1", 2),
    Link("figure8", "1 -2 1 -2", 3),
    torus_3(2),
    torus_3(3),
    torus_3(4),
    torus_3(5),
    Link("D", "D", 3),
    Link("D^3", "D^3", 3),
    Link("D^2 s2", "D^2 2", 3),
)

# links beyond the spectral budget, used for diagonal profiles
WIDE = (
    Link("D^2 s1^-5", "D^2 -1 -1 -1 -1 -1", 3),
    Link("D^2 s2", "D^2 2", 3),
    Link("D^4 s1^-2 s2 s1^-1", "D^4 -1 -1 2 -1", 3),
)

# gradings where each WIDE link is supported on three diagonals
WIDE_AT = {"D^2 s1^-5": 0, "D^2 s2": -4, "D^4 s1^-2 s2 s1^-1": -5}


def family_members(budget: int, max_n: int | None = None) -> list[tuple[str, MurasugiClass, BraidWord]]:
    """Representatives of classes 0-3 with ``n >= 0`` and at most ``budget`` crossings."""
    out = []
    for omega in range(4):
        n = 0
        while max_n is None or n <= max_n:
            c = MurasugiClass(omega, n)
            w = murasugi_word(c)
            if len(w.letters) > budget:
                break
            out.append((f"Omega{omega}(n={n})", c, w))
            n += 1
    out.sort(key=lambda m: (len(m[2].letters), m[0]))
    return out
