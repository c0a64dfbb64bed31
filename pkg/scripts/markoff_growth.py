"""Counting tables for the Markoff tree (level 0) and the Clebsch cubic (level 20)."""
import argparse
import math
import time

from charvar.markoff import clebsch_roots, count


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-exp0", type=int, default=30, help="largest log10 R on level 0")
    ap.add_argument("--max-exp20", type=int, default=4, help="largest log10 R on level 20")
    args = ap.parse_args()

    t0 = time.perf_counter()
    radii = [10**e for e in range(2, args.max_exp0 + 1)]
    stats = count(0, [(3, 3, 3)], radii, fit=True)
    print("level 0: R, M(R), M/(log R)^2")
    for R, n in zip(radii, stats.counts):
        print(f"  1e{round(math.log10(R)):<3d} {n:6d}  {n / math.log(R) ** 2:.4f}")
    print(f"  least-squares C = {stats.fit_constant:.4f}")

    radii = [10**e for e in range(1, args.max_exp20 + 1)]
    counts = count(20, clebsch_roots(), radii).counts
    print("level 20: R, count, count/R")
    for R, n in zip(radii, counts):
        print(f"  {R:<7d} {n:7d}  {n / R:.3f}")
    print(f"({time.perf_counter() - t0:.1f}s)")


if __name__ == "__main__":
    main()
