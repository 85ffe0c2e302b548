"""Sample Fekete bounds over small generating sets of F2 and probe their order."""
import argparse

from growthlab.explorer import enumerate_gensets, sample_egr, wellorder_report
from growthlab.fixtures import free


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--size", type=int, default=2)
    ap.add_argument("--max-length", type=int, default=4)
    ap.add_argument("--radius", type=int, default=10)
    ap.add_argument("--epsilon", type=float, default=0.05)
    args = ap.parse_args()
    p = free(2)
    stream = enumerate_gensets(p, args.size, args.max_length)
    sample = sample_egr(p, stream, args.radius)
    print(f"{len(stream.verified)} generating sets, {len(stream.unknown)} undecided, "
          f"{len(sample.entries)} orbit classes")
    for e in sample.entries:
        key = e.orbit_key.format(p) if e.orbit_key else "-"
        print(f"  {e.bound.format()}  x{e.multiplicity:<3d} {e.genset.format(p)}  orbit {key}")
    rep = wellorder_report(sample, args.epsilon)
    print(f"clusters {len(rep.clusters)}, descending chain length {rep.chain_length}, "
          f"order type estimate {rep.order_type}{' (unstable)' if rep.order_type_unstable else ''}")
    print(rep.note)


if __name__ == "__main__":
    main()
