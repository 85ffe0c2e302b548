"""Enumerate upper cuts of egr(Z^2, {a, b}) using only the consequence log.

No completed rewriting system is used, so the counts are upper bounds that
shrink as the log grows; each emitted rational is printed with its budget.
"""
import argparse
import time
from fractions import Fraction

from growthlab.bounds import CutStream
from growthlab.census import generates_semi
from growthlab.consequences import make_oracle
from growthlab.fixtures import z2
from growthlab.words import standard_genset


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-weight", type=int, default=40)
    ap.add_argument("--budget-unit", type=int, default=100)
    ap.add_argument("--stop-at", type=Fraction, default=Fraction(3, 2))
    args = ap.parse_args()
    p = z2()
    s = standard_genset(p)
    stream = CutStream(p, s, oracle=make_oracle(p, semi_only=True), generation=generates_semi(p, s),
                       budget_unit=args.budget_unit, cap=300_000)
    t0 = time.perf_counter()
    best = None
    for item in stream.run(args.max_weight):
        if best is None or item.x < best:
            best = item.x
            print(f"{time.perf_counter() - t0:7.2f}s  x = {item.x}  (n, m) = {item.certificate}  "
                  f"log steps {item.budget}")
        if item.x <= args.stop_at:
            break
    print(f"{len(stream.emitted)} cuts emitted, least {best}")


if __name__ == "__main__":
    main()
