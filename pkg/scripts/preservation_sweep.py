"""Failure rate of majorization preservation across lambda for both depolarized families.

Sweeps lambda over (and a little past) the CP range. Out-of-range points are
not channels, so they are evaluated on the raw map built from its Choi matrix
and reported with cp = False; the rate there is only a curiosity.

    python scripts/preservation_sweep.py --dim 3 --points 11 --trials 500
"""

import argparse

import numpy as np

from majorize import channels as ch
from majorize import linalg as la
from majorize.majorization import majorizes_op
from majorize.properties import sample_majorization_pair, test_preservation


def raw_failures(j, n, trials, seed):
    # same pair stream as test_preservation, applied to a map that need not be CP
    fails = 0
    for i in range(trials):
        pair = sample_majorization_pair(n, la.trial_rng(seed, i))
        if not majorizes_op(ch.apply_choi(j, pair.lower), ch.apply_choi(j, pair.upper)):
            fails += 1
    return fails


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--dim", type=int, default=3)
    p.add_argument("--points", type=int, default=11)
    p.add_argument("--margin", type=float, default=0.1, help="fraction of the range to extend past each end")
    p.add_argument("--trials", type=int, default=500)
    p.add_argument("--seed", type=int, default=0)
    args = p.parse_args()
    n = args.dim
    u = la.random_haar_unitary(n, args.seed)
    print(f"{'family':<10} {'lambda':>12} {'cp':<6} {'failures':>8}")
    for kind in ("unitary", "transpose"):
        r = ch.lambda_range(kind, n)
        width = r.hi - r.lo
        build = ch.depolarized_unitary if kind == "unitary" else ch.depolarized_transpose
        raw = ch.depolarized_unitary_choi if kind == "unitary" else ch.depolarized_transpose_choi
        for lam in np.linspace(r.lo - args.margin * width, r.hi + args.margin * width, args.points):
            if r.contains(lam):
                fails = test_preservation(build(lam, u), args.trials, args.seed).failures
                cp = True
            else:
                fails = raw_failures(raw(lam, u), n, args.trials, args.seed)
                cp = False
            print(f"{kind:<10} {lam:>12.6f} {str(cp):<6} {fails:>8}")
        print(f"{'':<10} range [{r.lo_exact}, {r.hi_exact}]")


if __name__ == "__main__":
    main()
