"""Rerun every worked example and derivation transcript, print a table.

    python scripts/reproduce_examples.py [--max-size 7]
"""
import argparse
import sys
import time

from impure_s5 import corpus
from impure_s5.calculus import check_derivation
from impure_s5.transcripts import NEGATIVE, TRANSCRIPTS


def main() -> int:
    ap = argparse.ArgumentParser()
    ap.add_argument("--max-size", type=int, default=7)
    args = ap.parse_args()
    ok = True
    for name in corpus.DEMOS:
        t = time.perf_counter()
        r = corpus.demo(name, args.max_size)
        print(r.text())
        print(f"  ({time.perf_counter() - t:.1f}s)")
        ok &= r.passed
    print("\n== derivations")
    for t in TRANSCRIPTS.values():
        r = check_derivation(t.build())
        good = r.accepted and r.all_proven
        ok &= good
        print(f"  {t.name:<18} {r.verdict:<9} lines={r.top_lines:<3} steps={len(r.lines):<3} "
              f"provisos={len(r.provisos):<3} {'ok' if good else 'XX'}")
    for t in NEGATIVE.values():
        r = check_derivation(t.build())
        good = not r.accepted
        ok &= good
        print(f"  {t.name:<18} {r.verdict:<9} at line {r.label}: {r.reason} "
              f"{'ok' if good else 'XX'}")
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
