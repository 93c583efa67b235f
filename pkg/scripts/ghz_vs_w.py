"""Hardy violation maxima of uniform W states against GHZ states."""

import argparse

from hardy_w.analysis import ghz_w_comparison
from hardy_w.optimizer import OptOptions


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--n-min", type=int, default=3)
    parser.add_argument("--n-max", type=int, default=8)
    parser.add_argument("--starts", type=int, default=64)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()
    rows = ghz_w_comparison(args.n_min, args.n_max, OptOptions(starts=args.starts, seed=args.seed))
    print(f"{'N':>3}  {'W':>12}  {'GHZ':>12}")
    for r in rows:
        mark = "  GHZ higher" if r.ghz_wins else ""
        print(f"{r.n:>3}  {r.p_w:12.9f}  {r.p_ghz:12.9f}{mark}")


if __name__ == "__main__":
    main()
