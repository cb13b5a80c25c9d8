"""Run the definability clause suite, optionally without the symmetry reduction.

    python scripts/definability_suite.py --max-size 3 --max-m 2 [--full]
"""
import argparse
import sys
import time

from impure_s5.suites import definability_suite, symmetric_images


def main() -> int:
    ap = argparse.ArgumentParser()
    ap.add_argument("--agents", default="a,b")
    ap.add_argument("--max-size", type=int, default=3)
    ap.add_argument("--max-m", type=int, default=2)
    ap.add_argument("--refuter-bound", type=int, default=3)
    ap.add_argument("--full", action="store_true", help="instantiate every clause agent")
    args = ap.parse_args()
    agents = tuple(args.agents.split(","))
    if not args.full:
        t = time.perf_counter()
        ok = symmetric_images(agents, args.max_size, args.max_m)
        print(f"renamed instances cover the full set: {ok} ({time.perf_counter() - t:.1f}s)")
        if not ok:
            return 1
    t = time.perf_counter()
    r = definability_suite(agents, args.max_size, args.max_m, args.refuter_bound,
                           symmetric=not args.full)
    print(r.summary())
    for clause, q, status in r.failures[:10]:
        print(f"  {clause}: {sorted(map(str, q[0]))} |x {q[1]} -> {status}")
    print(f"{time.perf_counter() - t:.1f}s")
    return 0 if r.ok else 1


if __name__ == "__main__":
    sys.exit(main())
