"""n * P(n) for the explicit equal-w construction, evaluated exactly."""

import argparse

from hardy_w.analysis import asymptotic_scaling_check


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--n", type=int, nargs="+", default=[3, 10, 100, 1000, 10_000, 100_000, 1_000_000])
    args = parser.parse_args()
    for e in asymptotic_scaling_check(args.n):
        print(f"{e.n:>8}  P={e.probability:.12e}  n*P={e.n_times_p:.12f}")


if __name__ == "__main__":
    main()
