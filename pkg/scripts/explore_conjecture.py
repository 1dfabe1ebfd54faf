"""Orbit-preservation survey of random unital channels at dimension d >= 3.

    python scripts/explore_conjecture.py --dim 3 --channels 20 --trials 1000 --seed 0 --out explorer.json
"""

import argparse
import json

from majorize import io
from majorize.properties import conjecture_explorer


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--dim", type=int, default=3)
    p.add_argument("--channels", type=int, default=20)
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--forms", type=int, default=2)
    p.add_argument("--kraus-count", type=int, default=2)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", help="write the JSON summary here")
    args = p.parse_args()

    s = conjecture_explorer(args.dim, args.channels, args.trials, args.seed, args.forms, args.kraus_count)
    print(f"d = {s.dim}, seed = {s.seed}, rho0 spectrum = {[round(x, 6) for x in s.rho0_spectrum]}")
    print(s.table())
    survivors = [r for r in s.rows if r.source == "random-unital" and r.preserved]
    print(f"\nrandom unital channels preserving the orbit: {len(survivors)} / {args.channels}")
    print(f"elapsed: {s.elapsed_s:.1f} s")
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            json.dump(io.explorer_to_doc(s), fh, indent=1)


if __name__ == "__main__":
    main()
