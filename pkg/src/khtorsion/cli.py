"""Command line front end ``kh``.

Subcommands: ``compute`` (Khovanov homology), ``spectral`` (Lee, Turner or
Bockstein pages), ``thin`` (thin regions and the torsion theorem) and
``verify-paper`` (the 3-braid verification program).  Output is JSON by
default; ``--format csv`` and ``--format table`` are also available.

Exit codes: 0 success, 1 input error, 2 verification failure.
"""

from __future__ import annotations

import argparse
import csv
import functools
import hashlib
import io
import json
import os
import sys
import tempfile
import time
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from . import __version__, _accel
from .braid import BraidError, BraidWord, MurasugiClass, murasugi_word, parse_braid_word, reduce_to_nonneg
from .complex import Theory, build_complex
from .corpus import family_members
from .diagram import CONVENTIONS, DEFAULT_CONVENTION, braid_closure
from .homology import (
    BigradedGroup,
    FieldTable,
    field_homology,
    integral_homology,
    jones_polynomial,
    tables_equal,
    uct_check,
)
from .linalg import GF, QQ, ZZ, RingError, RingTag, is_prime, parse_ring
from .spectral import (
    bockstein_pages,
    bockstein_prediction,
    e1_matches,
    filtered_pages,
    free_mod_p,
    infinity_predictions,
    page_checks,
)
from .thin import analyze

HARD_LIMIT = 22
DEFAULT_BUDGET = 16
SPECTRAL_BUDGET = 12

EXIT_OK, EXIT_INPUT, EXIT_FAIL = 0, 1, 2


class InputError(ValueError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise InputError(message)


# -- jobs and caching ---------------------------------------------------------


def parse_murasugi(text: str) -> MurasugiClass:
    """``omega:n[:p1,p2,...[:q1,q2,...]]``, e.g. ``4:1:5`` for Delta^2 s1^-5."""
    parts = text.split(":")
    if len(parts) < 2:
        raise InputError("--murasugi expects omega:n[:p-list[:q-list]]")
    try:
        omega, n = int(parts[0]), int(parts[1])
        p = tuple(int(x) for x in parts[2].split(",")) if len(parts) > 2 and parts[2] else ()
        q = tuple(int(x) for x in parts[3].split(",")) if len(parts) > 3 and parts[3] else ()
    except ValueError as exc:
        raise InputError(f"bad --murasugi value {text!r}") from exc
    if omega == 5 and not q and p:
        p, q = (), p
    return MurasugiClass(omega, n, p, q)


def resolve_job(args) -> tuple[BraidWord, dict]:
    trace: tuple[str, ...] = ()
    cls = None
    if getattr(args, "murasugi", None):
        cls = parse_murasugi(args.murasugi)
        reduced, trace = reduce_to_nonneg(cls)
        w = murasugi_word(reduced)
        source = {"omega": cls.omega, "n": cls.n, "p": list(cls.p), "q": list(cls.q)}
        if trace:
            source["reduced_to"] = {
                "omega": reduced.omega, "n": reduced.n, "p": list(reduced.p), "q": list(reduced.q),
                "extended": reduced.extended,
            }
    else:
        if args.braid is None:
            raise InputError("give --braid (with --strands) or --murasugi")
        w = parse_braid_word(args.braid, args.strands)
        source = None
    n = len(w.letters)
    if not args.force:
        if n > HARD_LIMIT:
            raise InputError(f"{n} crossings exceeds the hard limit {HARD_LIMIT}; pass --force")
        if n > args.budget:
            raise InputError(f"{n} crossings exceeds the budget {args.budget}; raise --budget or pass --force")
    echo = {
        "braid": str(w),
        "strands": w.strands,
        "letters": list(w.letters),
        "crossings": n,
        "sign_convention": args.sign_convention,
        "transforms": list(trace),
    }
    if source is not None:
        echo["murasugi"] = source
    return w, echo


def cache_dir() -> Path:
    env = os.environ.get("KH_CACHE_DIR")
    return Path(env) if env else Path.home() / ".cache" / "khtorsion"


def cache_key(w: BraidWord, theory: str, ring: RingTag, convention: str) -> str:
    payload = json.dumps(
        {"letters": list(w.letters), "strands": w.strands, "theory": theory, "ring": str(ring),
         "convention": convention, "version": __version__},
        sort_keys=True,
    )
    return hashlib.sha256(payload.encode()).hexdigest()


def _atomic_write(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=".tmp-")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def cached_homology(w: BraidWord, ring: RingTag, convention: str, use_cache: bool = True):
    """Khovanov homology of the closure, through the on-disk cache."""
    path = cache_dir() / f"{cache_key(w, 'khovanov', ring, convention)}.json"
    if use_cache and path.exists():
        data = json.loads(path.read_text())
        if ring.kind == "Z":
            return BigradedGroup.from_json(data)
        return FieldTable(ring, {(g["i"], g["j"]): g["dim"] for g in data["groups"]})
    d = braid_closure(w, convention)
    c = build_complex(d, Theory.KHOVANOV, ring)
    h = integral_homology(c) if ring.kind == "Z" else field_homology(c, ring)
    if use_cache:
        _atomic_write(path, json.dumps(h.to_json(), sort_keys=True))
    return h


# -- output -------------------------------------------------------------------


def _cell(entry) -> str:
    if isinstance(entry, int):
        return str(entry) if entry else ""
    rk, tors = entry
    parts = []
    if rk:
        parts.append("Z" if rk == 1 else f"Z^{rk}")
    counts: dict[int, int] = {}
    for t in tors:
        counts[t] = counts.get(t, 0) + 1
    for t, k in sorted(counts.items()):
        parts.append(f"Z_{t}" if k == 1 else f"Z_{t}^{k}")
    return "+".join(parts)


def grid(table: dict) -> str:
    """Plain-text (i, j) grid, ``j`` decreasing down the rows."""
    if not table:
        return "(zero)\n"
    is_ = sorted({i for i, _ in table})
    js = sorted({j for _, j in table}, reverse=True)
    cols = list(range(is_[0], is_[-1] + 1))
    cells = {k: _cell(v) for k, v in table.items()}
    width = max([len(c) for c in cells.values()] + [len(str(i)) for i in cols] + [1])
    jw = max(len(str(j)) for j in js + ["j"])
    lines = [" " * jw + " | " + " ".join(str(i).rjust(width) for i in cols)]
    lines.append("-" * len(lines[0]))
    for j in js:
        row = " ".join(cells.get((i, j), "").rjust(width) for i in cols)
        lines.append(str(j).rjust(jw) + " | " + row)
    return "\n".join(lines) + "\n"


def _csv(rows: list[dict], fields: list[str]) -> str:
    buf = io.StringIO()
    wr = csv.DictWriter(buf, fieldnames=fields, lineterminator="\n")
    wr.writeheader()
    for r in rows:
        wr.writerow(r)
    return buf.getvalue()


def emit(envelope: dict, fmt: str, out=None) -> None:
    out = out or sys.stdout
    renderer = envelope.pop("_render", None)
    if fmt == "json":
        out.write(json.dumps(envelope, indent=2, sort_keys=True) + "\n")
        return
    out.write(renderer(fmt) if renderer else json.dumps(envelope, sort_keys=True) + "\n")


def _provenance(w: BraidWord, started: float | None, extra: dict | None = None) -> dict:
    prov = {
        "version": __version__,
        "backend": "numba" if _accel.numba_enabled() else "numpy",
        "crossings": len(w.letters),
    }
    if extra:
        prov.update(extra)
    if started is not None:
        prov["seconds"] = round(time.perf_counter() - started, 3)
    return prov


# -- commands -----------------------------------------------------------------


def cmd_compute(args) -> int:
    started = time.perf_counter() if args.timings else None
    w, echo = resolve_job(args)
    ring = parse_ring(args.ring)
    h = cached_homology(w, ring, args.sign_convention, not args.no_cache)
    result = {"ring": str(ring), "homology": h.to_json(), "jones": jones_polynomial(h).to_json()}
    result["jones_text"] = str(jones_polynomial(h))
    env = {"command": "compute", "input": echo, "result": result, "provenance": _provenance(w, started)}

    def render(fmt):
        if fmt == "csv":
            if isinstance(h, BigradedGroup):
                rows = [{"i": i, "j": j, "rank": rk, "torsion": ";".join(map(str, t))} for (i, j), (rk, t) in h.table.items()]
                return _csv(rows, ["i", "j", "rank", "torsion"])
            rows = [{"i": i, "j": j, "dim": d} for (i, j), d in h.table.items()]
            return _csv(rows, ["i", "j", "dim"])
        head = f"{echo['braid']} on {w.strands} strands over {ring}\n"
        return head + grid(h.table) + f"Jones: {result['jones_text']}\n"

    env["_render"] = render
    emit(env, args.format)
    return EXIT_OK


def _spectral_checks(seq: str, w: BraidWord, pages, convention, ring, p) -> list[dict]:
    checks = [page_checks(pages).to_json()]
    if seq in ("lee", "turner"):
        lee_pred, turner_pred = infinity_predictions(w, convention)
        pred = lee_pred if seq == "lee" else turner_pred
        checks.append({"check": "infinity_totals", "ok": pages[-1].by_i() == pred,
                       "predicted": {str(k): v for k, v in pred.items()},
                       "found": {str(k): v for k, v in pages[-1].by_i().items()}})
        kh = cached_homology(w, ring, convention)
        checks.append({"check": "page1_is_khovanov", "ok": e1_matches(pages, kh)})
    else:
        z = cached_homology(w, ZZ, convention)
        free = free_mod_p(z)
        checks.append({"check": "terminal_is_free_mod_p", "ok": pages[-1].table == free})
        agree = all((pg.table, pg.ranks) == bockstein_prediction(z, p, pg.r) for pg in pages)
        checks.append({"check": "pages_match_smith_data", "ok": agree})
    return checks


def cmd_spectral(args) -> int:
    started = time.perf_counter() if args.timings else None
    w, echo = resolve_job(args)
    d = braid_closure(w, args.sign_convention)
    seq = args.seq
    if seq == "bockstein":
        p = args.p
        if not is_prime(p):
            raise InputError(f"--p must be prime, got {p}")
        z = cached_homology(w, ZZ, args.sign_convention)
        c = build_complex(d, Theory.KHOVANOV, GF(p))
        pages = bockstein_pages(c, p, z)
        ring = GF(p)
    else:
        theory = Theory.LEE if seq == "lee" else Theory.TURNER
        default = "Q" if seq == "lee" else "Z2"
        ring = parse_ring(args.ring or default)
        c = build_complex(d, theory, ring)
        pages = filtered_pages(c)
        p = ring.characteristic
    checks = _spectral_checks(seq, w, pages, args.sign_convention, ring, p)
    lee_pred, turner_pred = infinity_predictions(w, args.sign_convention)
    result = {
        "sequence": seq,
        "ring": str(ring),
        "pages": [pg.to_json() for pg in pages],
        "infinity": {str(k): v for k, v in pages[-1].by_i().items()},
        "total_rank_by_page": {str(pg.r): pg.rank_total() for pg in pages},
    }
    if seq != "bockstein":
        result["predicted_infinity"] = {str(k): v for k, v in (lee_pred if seq == "lee" else turner_pred).items()}
    ok = all(ch["ok"] for ch in checks)
    env = {"command": "spectral", "input": echo, "result": result, "checks": checks,
           "provenance": _provenance(w, started, {"generators": c.n_gens})}

    def render(fmt):
        if fmt == "csv":
            rows = [{"r": pg.r, "i": i, "j": j, "dim": v, "rank": pg.ranks.get((i, j), 0)}
                    for pg in pages for (i, j), v in pg.table.items()]
            return _csv(rows, ["r", "i", "j", "dim", "rank"])
        out = []
        for pg in pages:
            out.append(f"E_{pg.r}  (d_{pg.r} bidegree {pg.bidegree}, total rank {pg.rank_total()})\n")
            out.append(grid(pg.table))
        out.append("checks: " + ", ".join(f"{ch['check']}={'ok' if ch['ok'] else 'FAIL'}" for ch in checks) + "\n")
        return "".join(out)

    env["_render"] = render
    emit(env, args.format)
    return EXIT_OK if ok else EXIT_FAIL


def _spectral_source(d):
    @functools.cache
    def pages():
        return (filtered_pages(build_complex(d, Theory.LEE, QQ)),
                filtered_pages(build_complex(d, Theory.TURNER, GF(2))))

    return pages


def cmd_thin(args) -> int:
    started = time.perf_counter() if args.timings else None
    w, echo = resolve_job(args)
    d = braid_closure(w, args.sign_convention)
    z = cached_homology(w, ZZ, args.sign_convention, not args.no_cache)
    spectral = _spectral_source(d) if len(w.letters) <= args.spectral_budget else None
    a = analyze(z, spectral)
    result = a.to_json()
    wide = a.profile.wide()
    if wide:
        result["inapplicable"] = [
            f"homology in grading {i} is supported on {len(ds)} diagonals {ds}" for i, ds in wide.items()
        ]
    env = {"command": "thin", "input": echo, "result": result, "provenance": _provenance(w, started)}

    def render(fmt):
        if fmt == "csv":
            rows = [{"i1": r.i1, "i2": r.i2, "s": ";".join(map(str, r.s_values)), "verdict": rep.verdict,
                     "verified": ver.ok if rep.verdict else ""}
                    for r, rep, ver in zip(a.regions, a.reports, a.verdicts)]
            return _csv(rows, ["i1", "i2", "s", "verdict", "verified"])
        out = [grid(z.table)]
        for i, ds in wide.items():
            out.append(f"grading {i}: {len(ds)} diagonals {ds} (theorem inapplicable there)\n")
        for r, rep, ver in zip(a.regions, a.reports, a.verdicts):
            cond = " ".join(f"({k}){'y' if v else 'n'}" for k, v in rep.conditions.items())
            extra = "" if rep.stronger is None else f" stronger={'y' if rep.stronger else 'n'}"
            status = ("verified" if ver.ok else "FAILED") if rep.verdict else "no verdict"
            out.append(f"[{r.i1},{r.i2}] s={rep.s}: {cond}{extra} -> {status}\n")
        out.append(f"sound: {a.sound}\n")
        return "".join(out)

    env["_render"] = render
    emit(env, args.format)
    return EXIT_OK if a.sound else EXIT_FAIL


def _decomposition_check(n: int, convention: str) -> list[dict]:
    """Odd twists against the torus knot plus a shifted unknot."""
    odd = parse_braid_word(f"D^{2 * n + 1}", 3)
    torus = BraidWord(3, (1, 2) * (3 * n + 1))
    unknot = BraidWord(1, ())
    out = []
    for ring in (ZZ, QQ, GF(2), GF(3)):
        lhs = cached_homology(odd, ring, convention)
        a = cached_homology(torus, ring, convention).shift(0, -1)
        b = cached_homology(unknot, ring, convention).shift(-4 * n - 2, -12 * n - 5)
        out.append({"check": f"decomposition n={n} over {ring}", "ok": lhs == a + b})
    return out


def verify_member(label: str, w: BraidWord, omega: int, n: int, convention: str, spectral_budget: int) -> dict:
    started = time.perf_counter()
    z = cached_homology(w, ZZ, convention)
    checks = []
    tors = z.torsion_values()
    checks.append({"check": "only Z2 torsion", "ok": all(t == 2 for t in tors), "torsion": tors})
    d = braid_closure(w, convention)
    spectral = _spectral_source(d) if len(w.letters) <= spectral_budget else None
    a = analyze(z, spectral)
    checks.append({"check": "theorem checker sound", "ok": a.sound})
    covered = all(
        any(rep.verdict and reg.contains(i) for reg, rep in zip(a.regions, a.reports))
        for (i, _), (_, t) in z.table.items()
        if t
    )
    checks.append({"check": "torsion inside verified regions", "ok": covered})
    for p in (2, 3):
        f = cached_homology(w, GF(p), convention)
        checks.append({"check": f"uct Z{p}", "ok": uct_check(z, f).ok})
    if spectral is not None:
        lee, turner = spectral()
        pred, _ = infinity_predictions(w, convention)
        checks.append({"check": "Lee infinity page", "ok": lee[-1].by_i() == pred})
        checks.append({"check": "Turner infinity page", "ok": turner[-1].by_i() == pred})
        pages = bockstein_pages(build_complex(d, Theory.KHOVANOV, GF(2)), 2, z)
        checks.append({"check": "Bockstein terminal page", "ok": pages[-1].table == free_mod_p(z)})
    if omega == 3:
        checks.extend(_decomposition_check(n, convention))
    if omega == 0 and n == 0:
        u = cached_homology(BraidWord(1, ()), ZZ, convention)
        checks.append({"check": "unlink is a tensor power", "ok": tables_equal(z.table, _tensor_power(u, 3))})
    return {
        "member": label,
        "braid": str(w),
        "crossings": len(w.letters),
        "ok": all(ch["ok"] for ch in checks),
        "checks": checks,
        "seconds": round(time.perf_counter() - started, 2),
    }


def _tensor_power(u: BigradedGroup, k: int) -> dict:
    table = {(0, 0): (1, ())}
    for _ in range(k):
        nxt: dict = {}
        for (i, j), (r, _) in table.items():
            for (a, b), (s, _) in u.table.items():
                key = (i + a, j + b)
                nxt[key] = (nxt.get(key, (0, ()))[0] + r * s, ())
        table = nxt
    return table


def cmd_verify_paper(args) -> int:
    members = family_members(args.budget, args.max_n)
    if not members:
        raise InputError("no family member fits the crossing budget")
    jobs = [(label, w, c.omega, c.n, args.sign_convention, args.spectral_budget) for label, c, w in members]
    if args.workers > 1:
        with ProcessPoolExecutor(args.workers) as pool:
            results = list(pool.map(_verify_job, jobs))
    else:
        results = [verify_member(*job) for job in jobs]
    ok = all(r["ok"] for r in results)
    env = {
        "command": "verify-paper",
        "input": {"budget": args.budget, "max_n": args.max_n, "sign_convention": args.sign_convention},
        "result": {"members": results, "passed": sum(r["ok"] for r in results), "total": len(results), "ok": ok},
        "provenance": {"version": __version__, "backend": "numba" if _accel.numba_enabled() else "numpy"},
    }

    def render(fmt):
        if fmt == "csv":
            rows = [{"member": r["member"], "braid": r["braid"], "crossings": r["crossings"], "ok": r["ok"]} for r in results]
            return _csv(rows, ["member", "braid", "crossings", "ok"])
        lines = []
        for r in results:
            failed = [c["check"] for c in r["checks"] if not c["ok"]]
            status = "PASS" if r["ok"] else "FAIL " + "; ".join(failed)
            lines.append(f"{r['member']:<16} {r['crossings']:>3} crossings  {status}")
        lines.append(f"{sum(r['ok'] for r in results)}/{len(results)} members pass")
        return "\n".join(lines) + "\n"

    env["_render"] = render
    emit(env, args.format)
    return EXIT_OK if ok else EXIT_FAIL


def _verify_job(job):
    return verify_member(*job)


# -- parser -------------------------------------------------------------------


def _common(p: argparse.ArgumentParser, word: bool = True) -> None:
    if word:
        p.add_argument("--braid", help='braid word, e.g. "1 2 -1" or "D^2 -1"')
        p.add_argument("--strands", type=int, default=3)
        p.add_argument("--murasugi", help="Murasugi class omega:n[:p-list[:q-list]] instead of --braid")
        p.add_argument("--force", action="store_true", help="ignore the crossing budget")
        p.add_argument("--no-cache", action="store_true")
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET, help="crossing budget")
    p.add_argument("--format", choices=("json", "csv", "table"), default="json")
    p.add_argument("--sign-convention", choices=CONVENTIONS, default=DEFAULT_CONVENTION)
    p.add_argument("--timings", action="store_true", help="add wall-clock time to the output")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="kh", description="Khovanov homology of braid closures")
    parser.add_argument("--version", action="version", version=f"kh {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("compute", help="Khovanov homology over Z, Q or Z_p")
    _common(p)
    p.add_argument("--ring", default="Z")
    p.set_defaults(func=cmd_compute)

    p = sub.add_parser("spectral", help="Lee, Turner or Bockstein spectral sequence")
    _common(p)
    p.add_argument("--seq", choices=("lee", "turner", "bockstein"), required=True)
    p.add_argument("--ring", default=None)
    p.add_argument("--p", type=int, default=2, help="prime for the Bockstein sequence")
    p.set_defaults(func=cmd_spectral)

    p = sub.add_parser("thin", help="thin regions and the torsion theorem")
    _common(p)
    p.add_argument("--spectral-budget", type=int, default=SPECTRAL_BUDGET,
                   help="largest crossing number for which spectral pages are computed")
    p.set_defaults(func=cmd_thin)

    p = sub.add_parser("verify-paper", help="verify the 3-braid torsion program on classes 0-3")
    _common(p, word=False)
    p.add_argument("--max-n", type=int, default=None)
    p.add_argument("--spectral-budget", type=int, default=10)
    p.add_argument("--workers", type=int, default=os.cpu_count() or 1)
    p.set_defaults(func=cmd_verify_paper)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except (InputError, BraidError, RingError) as exc:
        sys.stdout.write(json.dumps({"error": type(exc).__name__, "message": str(exc)}) + "\n")
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
