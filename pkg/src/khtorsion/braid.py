"""Braid words and Murasugi's representatives of 3-braid conjugacy classes.

A letter ``k > 0`` stands for the generator sigma_k and ``k < 0`` for its
inverse.  Words are kept literally: no free reduction, no conjugation.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

HALF_TWIST_3 = (1, 2, 1)

_POWER = re.compile(r"^D(?:\^(-?\d+))?$")


class BraidError(ValueError):
    """Raised for malformed braid words or Murasugi parameters."""


@dataclass(frozen=True)
class BraidWord:
    strands: int
    letters: tuple[int, ...] = ()

    def __post_init__(self):
        if not isinstance(self.strands, int) or self.strands < 1:
            raise BraidError(f"strand count must be a positive integer, got {self.strands!r}")
        letters = tuple(int(k) for k in self.letters)
        for k in letters:
            if k == 0 or abs(k) >= self.strands:
                raise BraidError(
                    f"generator {k} out of range for {self.strands} strands"
                )
        object.__setattr__(self, "letters", letters)

    def __len__(self) -> int:
        return len(self.letters)

    def __str__(self) -> str:
        return " ".join(str(k) for k in self.letters)

    @property
    def crossings(self) -> int:
        return len(self.letters)

    def key(self) -> str:
        """Canonical text key: strand count plus the literal letter list."""
        return f"{self.strands}:{','.join(map(str, self.letters))}"


def half_twist(strands: int) -> tuple[int, ...]:
    """Letters of the positive half twist on ``strands`` strands."""
    out: list[int] = []
    for top in range(strands - 1, 0, -1):
        out.extend(range(1, top + 1))
    return tuple(out)


def parse_braid_word(text: str, strands: int) -> BraidWord:
    """Parse ``"1 -2 D^2 ..."`` into a :class:`BraidWord`.

    ``D`` is the positive half twist and ``D^k`` its ``k``-th power, expanded
    literally (a negative power expands to inverted letters in reverse order).
    """
    letters: list[int] = []
    delta = half_twist(strands)
    for token in text.split():
        m = _POWER.match(token)
        if m:
            power = int(m.group(1)) if m.group(1) is not None else 1
            if power >= 0:
                letters.extend(delta * power)
            else:
                letters.extend(tuple(-k for k in reversed(delta)) * (-power))
            continue
        try:
            letters.append(int(token))
        except ValueError:
            raise BraidError(f"malformed token {token!r}") from None
    return BraidWord(strands, tuple(letters))


def mirror(w: BraidWord) -> BraidWord:
    return BraidWord(w.strands, tuple(-k for k in w.letters))


def phi_swap(w: BraidWord) -> BraidWord:
    """Exchange sigma_1 and sigma_2 on a 3-braid."""
    if w.strands != 3:
        raise BraidError("phi_swap is defined on 3-strand braids only")
    return BraidWord(3, tuple((3 - abs(k)) * (1 if k > 0 else -1) for k in w.letters))


@dataclass(frozen=True)
class MurasugiClass:
    """Parameters of one of Murasugi's seven conjugacy families in B_3.

    ``extended`` admits zero exponents in class 6 (the image of the
    mirror/swap reduction may need them).
    """

    omega: int
    n: int = 0
    p: tuple[int, ...] = ()
    q: tuple[int, ...] = ()
    extended: bool = False

    def __post_init__(self):
        object.__setattr__(self, "p", tuple(int(x) for x in self.p))
        object.__setattr__(self, "q", tuple(int(x) for x in self.q))
        if self.omega not in range(7):
            raise BraidError(f"unknown Murasugi class {self.omega}")
        need_p = {4: 1, 6: None}.get(self.omega, 0)
        need_q = {5: 1, 6: None}.get(self.omega, 0)
        if self.omega == 6:
            if len(self.p) != len(self.q) or not self.p:
                raise BraidError("class 6 needs equal-length, nonempty p and q")
        elif len(self.p) != need_p or len(self.q) != need_q:
            raise BraidError(f"arity mismatch for class {self.omega}")
        floor = 0 if self.extended else 1
        if any(x < floor for x in self.p + self.q):
            raise BraidError("exponents must be positive")


def _delta_power(k: int) -> list[int]:
    if k >= 0:
        return list(HALF_TWIST_3) * k
    return [-x for x in reversed(HALF_TWIST_3)] * (-k)


def murasugi_word(c: MurasugiClass) -> BraidWord:
    """Literal representative word of a Murasugi class."""
    if c.omega == 3:
        letters = _delta_power(2 * c.n + 1)
    else:
        letters = _delta_power(2 * c.n)
    if c.omega == 1:
        letters += [1, 2]
    elif c.omega == 2:
        letters += [1, 2, 1, 2]
    elif c.omega == 4:
        letters += [-1] * c.p[0]
    elif c.omega == 5:
        letters += [2] * c.q[0]
    elif c.omega == 6:
        for a, b in zip(c.p, c.q):
            letters += [-1] * a + [2] * b
    return BraidWord(3, tuple(letters))


def reduce_to_nonneg(c: MurasugiClass) -> tuple[MurasugiClass, tuple[str, ...]]:
    """Trade a negative twist parameter for a mirror and possibly a swap.

    Returns the new class and the applied transforms in order.  The new
    class closes to the transformed link up to conjugation, which keeps the
    torsion content unchanged.
    """
    if c.n >= 0:
        return c, ()
    n = -c.n
    if c.omega == 0:
        return MurasugiClass(0, n), ("mirror",)
    if c.omega == 1:
        return MurasugiClass(2, n - 1), ("mirror",)
    if c.omega == 2:
        return MurasugiClass(1, n - 1), ("mirror",)
    if c.omega == 3:
        return MurasugiClass(3, n - 1), ("mirror",)
    if c.omega == 4:
        return MurasugiClass(5, n, q=c.p), ("mirror", "phi")
    if c.omega == 5:
        return MurasugiClass(4, n, p=c.q), ("mirror", "phi")
    # sigma_2^{p_1} sigma_1^{-q_1} ... sigma_1^{-q_r}, padded with zero exponents
    return (
        MurasugiClass(6, n, p=(0,) + c.q, q=c.p + (0,), extended=True),
        ("mirror", "phi"),
    )


def apply_transforms(w: BraidWord, transforms) -> BraidWord:
    for t in transforms:
        w = mirror(w) if t == "mirror" else phi_swap(w)
    return w


@dataclass(frozen=True)
class ClosurePermutation:
    perm: tuple[int, ...]
    cycles: tuple[tuple[int, ...], ...] = field(default=())

    @property
    def components(self) -> int:
        return len(self.cycles)


def closure_permutation(w: BraidWord) -> ClosurePermutation:
    """Permutation of strand positions induced by the word, with its cycles.

    ``perm[a]`` is the top position reached by the strand entering the
    bottom at position ``a`` (0-based).
    """
    pos = list(range(w.strands))  # pos[strand] = current position
    at = list(range(w.strands))  # at[position] = strand
    for k in w.letters:
        a = abs(k) - 1
        s1, s2 = at[a], at[a + 1]
        at[a], at[a + 1] = s2, s1
        pos[s1], pos[s2] = a + 1, a
    perm = tuple(pos)
    seen = [False] * w.strands
    cycles = []
    for start in range(w.strands):
        if seen[start]:
            continue
        cyc = []
        x = start
        while not seen[x]:
            seen[x] = True
            cyc.append(x)
            x = perm[x]
        cycles.append(tuple(cyc))
    return ClosurePermutation(perm, tuple(cycles))
