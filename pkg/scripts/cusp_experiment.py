"""Kill the free generator of F2 * Z step by step and compare with F3."""
import argparse

from growthlab.explorer import cusp_sequence
from growthlab.fixtures import free
from growthlab.words import standard_genset


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--steps", type=int, default=6)
    ap.add_argument("--radius", type=int, default=8)
    args = ap.parse_args()
    p = free(2)
    seq = cusp_sequence(p, standard_genset(p), steps=args.steps, radius=args.radius)
    print(f"target F3 balls {list(seq.target_sizes)}  bound {seq.target_bound.format()}")
    for st in seq.steps:
        print(f"i={st.index}  w={p.format_word(st.word):12s} bound {st.bound.format()}  gap {st.gap:.6f}  "
              f"dominated={st.dominated}")


if __name__ == "__main__":
    main()
