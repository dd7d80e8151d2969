"""Print exact one-sided sign-test p-values for a grid of win/loss counts.

    python scripts/sign_test_table.py [--max-n 20]
"""
from __future__ import annotations

import argparse

from commitforge.metrics import sign_test_exact


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--max-n", type=int, default=12, help="largest wins + losses to tabulate")
    ap.add_argument("--alpha", type=float, default=0.05)
    a = ap.parse_args()
    print(f"{'n':>3} {'wins':>5} {'p':>10}  exact")
    for n in range(1, a.max_n + 1):
        for wins in range(n // 2 + 1, n + 1):
            p = sign_test_exact(wins, n - wins)
            mark = "*" if p <= a.alpha else " "
            print(f"{n:>3} {wins:>5} {float(p):>10.6f}{mark} {p}")


if __name__ == "__main__":
    main()
