"""Uniform-W maxima for N = 3..10 next to the reference values."""

import argparse
import time

from hardy_w.optimizer import OptOptions, perfect_w_table

REFERENCE = {
    3: 0.07186776197291751,
    4: 0.09802431986561981,
    5: 0.1016666013383646,
    6: 0.0981781711941636,
    7: 0.09256920089757938,
    8: 0.08658662542877839,
    9: 0.08085438836971731,
    10: 0.07557767230678995,
}


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--starts", type=int, default=64)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()
    t0 = time.perf_counter()
    rows = perfect_w_table(3, 10, OptOptions(starts=args.starts, seed=args.seed))
    print(f"{'N':>3}  {'found':>20}  {'reference':>20}  {'diff':>9}")
    for n, p in rows:
        print(f"{n:>3}  {p:20.17f}  {REFERENCE[n]:20.17f}  {p - REFERENCE[n]:9.1e}")
    print(f"{time.perf_counter() - t0:.1f} s")


if __name__ == "__main__":
    main()
