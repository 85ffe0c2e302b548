"""Print exact ball sizes and Fekete bounds for the standard fixtures."""
import argparse

from growthlab.bounds import egr_upper, ratio_estimate
from growthlab.census import exact_balls
from growthlab.consequences import make_oracle
from growthlab.fixtures import cyclic, free, surface2, z2, z3
from growthlab.words import standard_genset

FIXTURES = {"F1": lambda: free(1), "F2": lambda: free(2), "F3": lambda: free(3), "Z2": z2, "Z3": z3,
            "Z6": lambda: cyclic(6), "surface2": surface2}


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--radius", type=int, default=8)
    ap.add_argument("--only", nargs="*", choices=sorted(FIXTURES))
    args = ap.parse_args()
    for name in args.only or FIXTURES:
        p = FIXTURES[name]()
        c = exact_balls(make_oracle(p), standard_genset(p), args.radius)
        b = egr_upper(c)
        est = ratio_estimate(c)
        print(f"{name:9s} {p.format()}")
        print(f"  balls  {list(c.ball_sizes)}")
        print(f"  bound  {b.format()}  witness (n, m) = ({b.witness_radius}, {b.witness_count})")
        if est.finite:
            print("  census stabilised: finite group")
        else:
            root = est.dominant_root if est.dominant_root is not None else est.ratio
            print(f"  growth estimate (uncertified)  {root:.6f}")


if __name__ == "__main__":
    main()
