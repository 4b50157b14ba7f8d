"""Agreement of the two sides as the averaging depth grows.

The invariance defect of a depth-L average bounds what the comparison can
certify, so agreement should track min(delta_omega, delta_eta).
"""

import argparse
import time

from mumford_cup.cup import cup_lhs, cup_rhs
from mumford_cup.forms import invariance_defect
from mumford_cup.scene import load


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("scene", nargs="?", default="scenes/genus1.toml")
    ap.add_argument("--depths", type=int, nargs="+", default=[1, 2, 4, 6, 8])
    args = ap.parse_args()

    scene = load(args.scene)
    print(f"{'depth':>5} {'d_omega':>8} {'d_eta':>6} {'agree':>6} {'secs':>6}")
    for L in args.depths:
        t0 = time.perf_counter()
        pr = scene.problem(depth=L)
        lhs, _ = cup_lhs(pr)
        rhs, _ = cup_rhs(pr)
        d_om = invariance_defect(pr.omega, pr.data, pr.prec, pr.window)
        d_eta = invariance_defect(pr.eta, pr.data, pr.prec, pr.window)
        print(f"{L:>5} {d_om:>8} {d_eta:>6} {(lhs - rhs).digits():>6g} {time.perf_counter() - t0:>6.1f}")


if __name__ == "__main__":
    main()
