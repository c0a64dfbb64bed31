"""Thrice-punctured-sphere geodesic lengths against the 2 n log(2 m/n) estimate."""
import argparse
import sys

from charvar.emit import estimate_csv
from charvar.lengths import estimate_compare


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--m-max", type=int, default=40)
    ap.add_argument("--n-max", type=int, default=10)
    ap.add_argument("--csv", help="also write the full table here")
    args = ap.parse_args()

    rows = estimate_compare(range(2, args.m_max + 1), range(1, args.n_max + 1))
    below = sum(r.estimate <= r.actual for r in rows)
    worst = max(rows, key=lambda r: r.estimate / r.actual)
    print(f"{len(rows)} classes; estimate <= actual in {below}")
    print(f"largest estimate/actual = {worst.estimate / worst.actual:.3f} at (m, n) = ({worst.m}, {worst.n})")
    print(f"lower bound <= actual in {sum(r.lower_bound <= r.actual for r in rows)}")
    text = estimate_csv(rows)
    if args.csv:
        with open(args.csv, "w", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text if len(rows) <= 20 else "")


if __name__ == "__main__":
    main()
