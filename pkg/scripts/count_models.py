"""Labeled and isomorphism-class counts of chromatic complexes, plus model counts.

    python scripts/count_models.py --agents ab abc --max-verts 3
"""
import argparse
import time

from impure_s5.search import Bounds, _pairs, count_complexes, enumerate_complexes


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--agents", nargs="+", default=["ab", "abc"])
    ap.add_argument("--max-verts", type=int, default=2)
    ap.add_argument("--vars", type=int, default=1)
    args = ap.parse_args()
    print(f"{'agents':<7} {'bound':>5} {'labeled':>9} {'iso':>7} {'models':>10} {'secs':>6}")
    for agents in args.agents:
        for bound in range(1, args.max_verts + 1):
            if len(agents) >= 3 and bound >= 3:
                continue   # too many to enumerate in Python
            t = time.perf_counter()
            variables = Bounds(tuple(agents), bound, args.vars).variables()
            models = sum(1 << len(_pairs(m, variables)) for m in enumerate_complexes(agents, bound))
            labeled = count_complexes(agents, bound)
            iso = count_complexes(agents, bound, dedupe=True)
            print(f"{agents:<7} {bound:>5} {labeled:>9} {iso:>7} {models:>10} "
                  f"{time.perf_counter() - t:>6.1f}")


if __name__ == "__main__":
    main()
