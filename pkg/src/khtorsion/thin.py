"""Thin regions and the torsion theorem for them.

A grading interval ``[i1, i2]`` is thin when, over every prime field, the
homology there sits on the two diagonals ``2i - j = s - 1`` and
``2i - j = s + 1``.  Mod-p support is read off integral homology through the
universal coefficient theorem, so only primes dividing a torsion
coefficient need separate treatment.
"""

from __future__ import annotations

from collections.abc import Callable
from dataclasses import dataclass, field

from .homology import BigradedGroup, Report, torsion_primes
from .spectral import SpectralPage

Bigrading = tuple[int, int]


@dataclass(frozen=True)
class DiagonalProfile:
    """Diagonal values ``2i - j`` occupied in each homological grading.

    ``support`` is the union over the rationals and all primes;
    ``by_field`` keeps the per-field sets (key ``0`` for the rationals).
    """

    support: dict
    by_field: dict

    def diagonals(self, i: int) -> frozenset:
        return self.support.get(i, frozenset())

    def gradings(self) -> list[int]:
        return sorted(self.support)

    def wide(self) -> dict[int, list[int]]:
        """Gradings supported on three or more diagonals."""
        return {i: sorted(d) for i, d in sorted(self.support.items()) if len(d) >= 3}

    def to_json(self) -> dict:
        return {
            "support": {str(i): sorted(d) for i, d in sorted(self.support.items())},
            "by_field": {
                ("Q" if p == 0 else f"Z{p}"): {str(i): sorted(d) for i, d in sorted(t.items())}
                for p, t in sorted(self.by_field.items())
            },
        }


def _mod_p_cells(z: BigradedGroup, p: int) -> set[Bigrading]:
    cells = {k for k, (free, _) in z.table.items() if free}
    if p:
        for (i, j), (_, tors) in z.table.items():
            if any(t % p == 0 for t in tors):
                cells.add((i, j))
                cells.add((i - 1, j))
    return cells


def support_diagonals(z: BigradedGroup) -> DiagonalProfile:
    """Diagonal profile over Q and every prime field, derived from ``z``."""
    primes = torsion_primes(z)
    by_field = {}
    for p in [0, *primes]:
        per_i: dict[int, set] = {}
        for i, j in _mod_p_cells(z, p):
            per_i.setdefault(i, set()).add(2 * i - j)
        by_field[p] = {i: frozenset(v) for i, v in per_i.items()}
    union: dict[int, set] = {}
    for table in by_field.values():
        for i, d in table.items():
            union.setdefault(i, set()).update(d)
    return DiagonalProfile({i: frozenset(v) for i, v in sorted(union.items())}, by_field)


@dataclass(frozen=True)
class ThinRegion:
    i1: int
    i2: int
    s_values: tuple[int, ...]
    empty_gradings: tuple[int, ...] = ()

    @property
    def s(self) -> int:
        return self.s_values[0]

    def contains(self, i: int) -> bool:
        return self.i1 <= i <= self.i2

    def lower(self, i: int, s: int | None = None) -> int:
        return 2 * i - (self.s if s is None else s) - 1

    def upper(self, i: int, s: int | None = None) -> int:
        return 2 * i - (self.s if s is None else s) + 1

    def to_json(self) -> dict:
        return {"i1": self.i1, "i2": self.i2, "s": list(self.s_values), "empty_gradings": list(self.empty_gradings)}


def _compatible(diags: frozenset) -> set[int] | None:
    """Values of ``s`` with ``diags`` inside ``{s-1, s+1}``; None means any."""
    if not diags:
        return None
    lo, hi = min(diags), max(diags)
    if lo == hi:
        return {lo - 1, lo + 1}
    if hi - lo == 2 and len(diags) == 2:
        return {lo + 1}
    return set()


def find_thin_regions(profile: DiagonalProfile) -> list[ThinRegion]:
    """Maximal thin intervals, each with every ``s`` that fits it."""
    if not profile.support:
        return []
    lo, hi = min(profile.support), max(profile.support)
    compat = {i: _compatible(profile.diagonals(i)) for i in range(lo, hi + 1)}
    candidates = sorted({s for v in compat.values() if v for s in v})
    runs: dict[tuple[int, int], list[int]] = {}
    for s in candidates:
        i = lo
        while i <= hi:
            if compat[i] is not None and s not in compat[i]:
                i += 1
                continue
            start = i
            while i <= hi and (compat[i] is None or s in compat[i]):
                i += 1
            end = i - 1
            while start <= end and compat[start] is None:
                start += 1
            while end >= start and compat[end] is None:
                end -= 1
            if start <= end:
                runs.setdefault((start, end), []).append(s)
    intervals = sorted(runs)
    out = []
    for a, b in intervals:
        if any(c <= a and b <= d and (c, d) != (a, b) for c, d in intervals):
            continue
        empty = tuple(i for i in range(a, b + 1) if compat[i] is None)
        out.append(ThinRegion(a, b, tuple(sorted(runs[(a, b)])), empty))
    return out


@dataclass
class HypothesisReport:
    """Conditions (1)-(4) of the torsion theorem for one region and one ``s``."""

    region: ThinRegion
    s: int
    conditions: dict
    witnesses: dict
    k_plus: dict
    k_minus: dict
    ell: dict
    stronger: bool | None = None
    notes: list = field(default_factory=list)

    @property
    def verdict(self) -> bool:
        c = self.conditions
        return bool(c[1] and c[2] and c[3] and (c[4] or self.stronger))

    def to_json(self) -> dict:
        return {
            "region": self.region.to_json(),
            "s": self.s,
            "conditions": {str(k): v for k, v in self.conditions.items()},
            "witnesses": {str(k): [list(w) if isinstance(w, tuple) else w for w in v] for k, v in self.witnesses.items()},
            "k_plus": {str(i): v for i, v in sorted(self.k_plus.items())},
            "k_minus": {str(i): v for i, v in sorted(self.k_minus.items())},
            "ell": {str(i): v for i, v in sorted(self.ell.items())},
            "stronger_path": self.stronger,
            "verdict": self.verdict,
            "notes": list(self.notes),
        }


def _dim_mod_p_at(z: BigradedGroup, i: int, p: int) -> int:
    total = 0
    for (a, j), (free, tors) in z.table.items():
        if a == i:
            total += free + sum(1 for t in tors if t % p == 0)
        elif a == i + 1:
            total += sum(1 for t in tors if t % p == 0)
    return total


def differentials_vanish(pages: list[SpectralPage], i: int) -> bool:
    """Every page differential out of homological grading ``i`` is zero."""
    return all(v == 0 for pg in pages for (a, _), v in pg.ranks.items() if a == i)


SpectralSource = Callable[[], tuple[list[SpectralPage], list[SpectralPage]]]


def _check_one(z: BigradedGroup, region: ThinRegion, s: int, spectral: SpectralSource | None) -> HypothesisReport:
    i1, i2 = region.i1, region.i2
    profile = support_diagonals(z)
    conditions, witnesses = {}, {}

    bad1 = [(i, d) for i in range(i1, i2 + 1) for d in sorted(profile.diagonals(i)) if d not in (s - 1, s + 1)]
    conditions[1], witnesses[1] = not bad1, bad1

    rat = sum(free for (i, _), (free, _) in z.table.items() if i == i1)
    bad2 = []
    for p in torsion_primes(z):
        if p != 2 and _dim_mod_p_at(z, i1, p) != rat:
            bad2.append(p)
    conditions[2], witnesses[2] = not bad2, bad2

    bad3 = [k for k, (_, tors) in sorted(z.table.items()) if k[0] == i1 and tors]
    conditions[3], witnesses[3] = not bad3, bad3

    bound = 2 * i1 - s - 3
    bad4 = [k for k in sorted(z.table) if k[0] == i1 - 1 and k[1] <= bound]
    conditions[4], witnesses[4] = not bad4, bad4

    k_plus, k_minus, ell = {}, {}, {}
    for i in range(i1, i2 + 1):
        k_plus[i] = z.rank(i, 2 * i - s + 1)
        k_minus[i] = z.rank(i, 2 * i - s - 1)
        ell[i] = sum(1 for t in z.torsion(i, 2 * i - s - 1) if t % 2 == 0)
    rep = HypothesisReport(region, s, conditions, witnesses, k_plus, k_minus, ell)
    if not conditions[4] and conditions[1] and conditions[2] and conditions[3]:
        if spectral is None:
            rep.notes.append("condition (4) fails; no spectral data to try the stronger form")
        else:
            lee, turner = spectral()
            rep.stronger = differentials_vanish(lee, i1 - 1) and differentials_vanish(turner, i1 - 1)
            rep.notes.append(
                "condition (4) fails; Lee and Turner differentials out of grading "
                f"{i1 - 1} {'all vanish' if rep.stronger else 'do not all vanish'}"
            )
    return rep


def check_main_theorem(
    z: BigradedGroup, region: ThinRegion, spectral: SpectralSource | None = None
) -> HypothesisReport:
    """Check the theorem's hypotheses on ``region``, trying each admissible ``s``.

    ``spectral`` lazily supplies (Lee pages, Turner pages) for the stronger
    form of condition (4).  The first ``s`` with a positive verdict wins.
    """
    reports = [_check_one(z, region, s, spectral) for s in region.s_values]
    for rep in reports:
        if rep.verdict:
            return rep
    return reports[0]


def verify_verdict(z: BigradedGroup, region: ThinRegion) -> Report:
    """All torsion in the region's gradings has order exactly 2."""
    bad = [
        (k, t)
        for k, (_, tors) in sorted(z.table.items())
        if region.contains(k[0])
        for t in tors
        if t != 2
    ]
    edge = [(k, list(tors)) for k, (_, tors) in sorted(z.table.items()) if k[0] == region.i2 + 1 and tors]
    details = {"torsion_in_region": sum(len(z.torsion(*k)) for k in z.table if region.contains(k[0]))}
    if edge:
        details["adjacent_torsion_above_i2"] = edge
    return Report("verdict", not bad, bad, details)


def lemma_rank_checks(
    z: BigradedGroup,
    report: HypothesisReport,
    lee: list[SpectralPage],
    turner: list[SpectralPage],
) -> Report:
    """Rank identities inside a thin region, read from page-1 differentials.

    ``d_T*`` and ``d_L*`` are the first differentials of the Turner and Lee
    sequences.  Checked: torsion sits on the lower diagonal above ``i1``;
    ``rk d_T*`` agrees on both diagonals; when the hypotheses hold,
    ``rk d_T* = rk d_L* = l_{i+1}`` on the lower diagonal.
    """
    region, s = report.region, report.s
    i1, i2 = region.i1, region.i2
    t1 = turner[0].ranks if turner else {}
    l1 = lee[0].ranks if lee else {}
    bad = []
    for (i, j), (_, tors) in sorted(z.table.items()):
        if region.contains(i) and tors and (i == i1 or j != 2 * i - s - 1):
            bad.append(("lower_diagonal", (i, j)))
    identities = []
    for i in range(i1, i2):
        lo, up = 2 * i - s - 1, 2 * i - s + 1
        a, b = t1.get((i, lo), 0), t1.get((i, up), 0)
        if a != b:
            bad.append(("turner_rank", (i, a, b)))
        if report.verdict:
            ell = report.ell.get(i + 1, 0)
            lr = l1.get((i, lo), 0)
            identities.append((i, a, lr, ell))
            if not a == lr == ell:
                bad.append(("turner_lee_torsion", (i, a, lr, ell)))
    if report.verdict and report.ell.get(i1, 0):
        bad.append(("ell_i1", report.ell[i1]))
    return Report("lemmas", not bad, bad, {"identities": identities})


@dataclass
class ThinAnalysis:
    profile: DiagonalProfile
    regions: list
    reports: list
    verdicts: list

    @property
    def sound(self) -> bool:
        """Every positive verdict is confirmed by the integral table."""
        return all(v.ok for r, v in zip(self.reports, self.verdicts) if r.verdict)

    def to_json(self) -> dict:
        return {
            "profile": self.profile.to_json(),
            "wide_gradings": {str(i): d for i, d in self.profile.wide().items()},
            "regions": [
                {
                    "region": reg.to_json(),
                    "hypotheses": rep.to_json(),
                    "verified": ver.ok if rep.verdict else None,
                    "verify_details": ver.to_json(),
                }
                for reg, rep, ver in zip(self.regions, self.reports, self.verdicts)
            ],
            "sound": self.sound,
        }


def analyze(z: BigradedGroup, spectral: SpectralSource | None = None) -> ThinAnalysis:
    profile = support_diagonals(z)
    regions = find_thin_regions(profile)
    reports = [check_main_theorem(z, r, spectral) for r in regions]
    verdicts = [verify_verdict(z, r) for r in regions]
    return ThinAnalysis(profile, regions, reports, verdicts)
