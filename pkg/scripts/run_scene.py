"""Full two-sided computation on a scene file, with the chain of identities."""

import argparse
import time

from mumford_cup.cup import verify
from mumford_cup.scene import load


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("scene", nargs="?", default="scenes/genus1.toml")
    ap.add_argument("--depth", type=int)
    ap.add_argument("--no-chain", action="store_true")
    args = ap.parse_args()

    scene = load(args.scene)
    t0 = time.perf_counter()
    rep = verify(scene.problem(depth=args.depth), chain=not args.no_chain)
    print(rep.format())
    print(f"\n{time.perf_counter() - t0:.1f}s")


if __name__ == "__main__":
    main()
