"""Round-trip ordinals through canonical point sets and the order-type estimator."""
import argparse
import random

from growthlab.ordinals import canonical_set, order_type_estimate, parse_ordinal


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("exprs", nargs="*", default=["w", "w^2", "w^3", "w^2*2 + w*3 + 1", "(w + 1) * w"])
    ap.add_argument("--depth", type=int, default=12)
    ap.add_argument("--noise-seeds", type=int, default=5)
    args = ap.parse_args()
    for text in args.exprs:
        x = parse_ordinal(text)
        est = order_type_estimate(canonical_set(x, args.depth))
        flag = " (unstable)" if est.unstable else ""
        print(f"{text:20s} = {x!s:20s} estimate {est.ordinal}{flag}")
    for seed in range(args.noise_seeds):
        rng = random.Random(seed)
        est = order_type_estimate(sorted(rng.random() for _ in range(100)))
        print(f"uniform noise seed {seed}: {est.ordinal}{' (unstable)' if est.unstable else ''}")


if __name__ == "__main__":
    main()
