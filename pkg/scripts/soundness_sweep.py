"""Sample axiom and rule instances and search for countermodels.

    python scripts/soundness_sweep.py --agents a,b,c --max-verts 2 --per-schema 60 --seed 0
"""
import argparse
import sys
import time

from impure_s5.formula import to_str
from impure_s5.search import Bounds, soundness_sweep


def main() -> int:
    ap = argparse.ArgumentParser()
    ap.add_argument("--agents", default="a,b,c")
    ap.add_argument("--max-verts", type=int, default=2)
    ap.add_argument("--vars", type=int, default=1)
    ap.add_argument("--per-schema", type=int, default=60)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    b = Bounds(tuple(args.agents.split(",")), args.max_verts, args.vars)
    t = time.perf_counter()
    r = soundness_sweep(b, per_schema=args.per_schema, seed=args.seed)
    print(r.summary())
    for name, f, (m, x) in r.countermodels[:5]:
        print(f"countermodel for {name}: {to_str(f, sugar=True)} false at {m.face_str(x)}")
    print(f"{time.perf_counter() - t:.1f}s")
    return 1 if r.countermodels else 0


if __name__ == "__main__":
    sys.exit(main())
