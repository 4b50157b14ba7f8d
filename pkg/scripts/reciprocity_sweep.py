"""Worst-case vanishing of the summed indices over random domains P^1 minus n discs."""

import argparse
import random
import time

from mumford_cup.coleman import coleman_primitive
from mumford_cup.cup import reciprocity_check
from mumford_cup.sampling import random_domain, random_form, random_pairing_module


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--p", type=int, default=5)
    ap.add_argument("--precision", type=int, default=32)
    ap.add_argument("--pairs", type=int, default=50)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    rng = random.Random(args.seed)
    print(f"{'discs':>5} {'dim':>3} {'worst':>6} {'mean':>6} {'secs':>6}")
    for n in range(1, min(args.p + 1, 6) + 1):
        for dim in (1, 2):
            t0 = time.perf_counter()
            digits = []
            for _ in range(args.pairs):
                ends = random_domain(rng, args.p, n)
                M = random_pairing_module(rng, dim)
                discs = [e.inner_disc() for e in ends]
                F = coleman_primitive(random_form(rng, discs, M), args.p, args.precision)
                G = coleman_primitive(random_form(rng, discs, M), args.p, args.precision)
                digits.append(reciprocity_check(ends, F, G).digits)
            print(f"{n:>5} {dim:>3} {min(digits):>6g} {sum(digits) / len(digits):>6.1f} "
                  f"{time.perf_counter() - t0:>6.1f}")


if __name__ == "__main__":
    main()
