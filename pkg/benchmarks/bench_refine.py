"""Time the canonical-labelling search under the numba and numpy backends.

Usage::

    python3 benchmarks/bench_refine.py [--repeat N]

Each graph is searched once per backend before timing, so numba compilation
is excluded.  Both backends must report the same automorphism group order
and the same canonical labelling; the script exits non-zero otherwise.
"""

from __future__ import annotations

import argparse
import statistics
import sys
import time

from homfac import iso
from homfac.graphs import gpaley, hamming, tgpaley
from homfac.homfac import psl28_factorisation

CASES = [
    ("GPaley(25,8)", lambda: gpaley(5, 2, 3)),
    ("TGPaley(49,24)", lambda: tgpaley(7, 2, 1)),
    ("H(9,2)", lambda: hamming(9, 2)),
    ("GPaley(81,20)", lambda: gpaley(3, 4, 4)),
    ("TGPaley(121,60)", lambda: tgpaley(11, 2, 1)),
    ("PSL(2,8) factor", lambda: psl28_factorisation().factor(0)),
    ("GPaley(343,114)", lambda: gpaley(7, 3, 3)),
]


def time_search(g, backend: str, repeat: int) -> tuple[float, iso.SearchResult]:
    res = iso.search(g, cap=g.n, backend=backend)
    times = []
    for _ in range(repeat):
        t = time.perf_counter()
        res = iso.search(g, cap=g.n, backend=backend)
        times.append(time.perf_counter() - t)
    return statistics.median(times), res


def main(argv: list[str] | None = None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args(argv)

    if iso.get_backend("numba").name != "numba":
        print("numba is not available; nothing to compare", file=sys.stderr)
        return 1

    print(f"{'graph':<18}{'n':>5}{'|Aut|':>16}{'numba s':>10}{'numpy s':>10}{'speedup':>9}")
    mismatch = False
    for name, build in CASES:
        g = build()
        t_nb, r_nb = time_search(g, "numba", args.repeat)
        t_np, r_np = time_search(g, "numpy", args.repeat)
        same = r_nb.order == r_np.order and list(r_nb.canonical_lab) == list(r_np.canonical_lab)
        mismatch |= not same
        flag = "" if same else "  MISMATCH"
        print(f"{name:<18}{g.n:>5}{r_nb.order:>16}{t_nb:>10.4f}{t_np:>10.4f}{t_np / t_nb:>8.1f}x{flag}")
    return 1 if mismatch else 0


if __name__ == "__main__":
    sys.exit(main())
