"""Time the numba kernels against the numpy fallbacks.

Each measurement runs in a fresh interpreter with ``KH_NUMBA`` set, after
one warm-up call so compilation is not counted.  Results go to stdout as a
table and optionally to a JSON file.
"""

from __future__ import annotations

import argparse
import json
import os
import subprocess
import sys

CHILD = r"""
import json, sys, time
from khtorsion.braid import parse_braid_word
from khtorsion.complex import Theory, build_complex
from khtorsion.diagram import all_states, braid_closure
from khtorsion.homology import integral_homology
from khtorsion.linalg import GF, ZZ

text, stage, repeat = sys.argv[1], sys.argv[2], int(sys.argv[3])
d = braid_closure(parse_braid_word(text, 3))


def work():
    if stage == "states":
        all_states(d)
    elif stage == "edges":
        build_complex(d, Theory.KHOVANOV, GF(2)).edge_coo()
    else:
        integral_homology(build_complex(d, Theory.KHOVANOV, ZZ))


work()
best = float("inf")
for _ in range(repeat):
    t = time.perf_counter()
    work()
    best = min(best, time.perf_counter() - t)
print(json.dumps(best))
"""

CASES = ["D^2 1 2", "D^3", "D^2 -1 -1 -1 -1 -1", "D^4"]
STAGES = ["states", "edges", "homology"]


def measure(text: str, stage: str, flag: str, repeat: int) -> float:
    env = dict(os.environ, KH_NUMBA=flag)
    out = subprocess.run(
        [sys.executable, "-c", CHILD, text, stage, str(repeat)],
        env=env,
        capture_output=True,
        text=True,
        check=True,
    )
    return json.loads(out.stdout)


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--cases", nargs="*", default=CASES)
    ap.add_argument("--stages", nargs="*", default=STAGES, choices=STAGES)
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--json", help="write results to this file")
    args = ap.parse_args(argv)

    rows = []
    print(f"{'braid':<22}{'stage':<10}{'numba s':>10}{'numpy s':>10}{'speedup':>9}")
    for text in args.cases:
        for stage in args.stages:
            fast = measure(text, stage, "1", args.repeat)
            slow = measure(text, stage, "0", args.repeat)
            rows.append({"braid": text, "stage": stage, "numba": fast, "numpy": slow})
            print(f"{text:<22}{stage:<10}{fast:>10.4f}{slow:>10.4f}{slow / max(fast, 1e-9):>8.1f}x")
    if args.json:
        with open(args.json, "w") as fh:
            json.dump(rows, fh, indent=2)
    return 0


if __name__ == "__main__":
    sys.exit(main())
