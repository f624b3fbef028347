"""Timing harness for the two kernel lanes.

``python3 -m orbifusion.benchmark --level 15`` builds the truncated
alcove cube and runs the exhaustive associativity check once per lane,
then prints a small table. The lanes must agree exactly, and the
harness asserts that before it reports any number; a benchmark of two
kernels that compute different things is worse than no benchmark.

The compiled lane pays its JIT cost on the warmup call, outside the
timed region, so the table shows steady-state throughput. Set
ORBIFUSION_PURE_NUMPY=1 (or uninstall numba) and the compiled column
degrades to a dash.
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from .kernels import associativity_violations, cube_to_csr, numba_enabled, su3_cube
from .su3 import _alcove_arrays


def _best(fn, repeat: int) -> float:
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def lane_rows(level: int, repeat: int) -> list[tuple[str, float, float | None]]:
    """Time both lanes on the bulk kernels; agreement is asserted, not timed."""
    _, L, la, lb, wflat, woff = _alcove_arrays(level)
    h = level + 3
    build_np = lambda: su3_cube(L, h, la, lb, wflat, woff, use_numba=False)
    build_nb = lambda: su3_cube(L, h, la, lb, wflat, woff, use_numba=True)

    cube = build_np()
    ptr, idx, val = cube_to_csr(cube)
    check_np = lambda: associativity_violations(ptr, idx, val, L, use_numba=False)
    check_nb = lambda: associativity_violations(ptr, idx, val, L, use_numba=True)

    rows: list[tuple[str, float, float | None]] = []
    compiled = numba_enabled()

    t_nb = None
    if compiled:
        if not np.array_equal(cube, build_nb()):
            raise AssertionError("lanes disagree on the alcove cube")
        t_nb = _best(build_nb, repeat)
    rows.append((f"alcove cube, level {level} (L = {L})", _best(build_np, repeat), t_nb))

    ok_np, wit_np = check_np()
    t_nb = None
    if compiled:
        ok_nb, wit_nb = check_nb()
        if ok_np != ok_nb or not np.array_equal(wit_np, wit_nb):
            raise AssertionError("lanes disagree on the associativity check")
        t_nb = _best(check_nb, repeat)
    rows.append(("associativity check", _best(check_np, repeat), t_nb))
    return rows


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(
        prog="python3 -m orbifusion.benchmark",
        description="compare the compiled and pure-numpy kernel lanes",
    )
    ap.add_argument("--level", type=int, default=12, help="alcove truncation level")
    ap.add_argument("--repeat", type=int, default=3, help="best-of repetitions")
    args = ap.parse_args(argv)

    if not numba_enabled():
        print("compiled lane off (numba missing or ORBIFUSION_PURE_NUMPY set)")
    rows = lane_rows(args.level, args.repeat)
    width = max(len(name) for name, _, _ in rows)
    print(f"{'kernel':<{width}}  {'numpy':>10}  {'numba':>10}  {'speedup':>8}")
    for name, t_np, t_nb in rows:
        if t_nb is None:
            print(f"{name:<{width}}  {t_np:>9.4f}s  {'-':>10}  {'-':>8}")
        else:
            print(
                f"{name:<{width}}  {t_np:>9.4f}s  {t_nb:>9.4f}s"
                f"  {t_np / t_nb:>7.1f}x"
            )
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
