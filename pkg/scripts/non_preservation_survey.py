"""How often random unital and amplitude-damping channels break majorization preservation.

    python scripts/non_preservation_survey.py --channels 20 --trials 1000
"""

import argparse

from majorize import channels as ch
from majorize.properties import random_unital_channel, test_preservation


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--channels", type=int, default=20)
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    args = p.parse_args()

    for gamma in (0.1, 0.5, 0.9):
        r = test_preservation(ch.amplitude_damping(gamma), args.trials, args.seed)
        print(f"amplitude damping gamma={gamma}: {r.failures}/{r.trials} failures")
    for n in (2, 3, 4):
        rates = []
        for i in range(args.channels):
            phi = random_unital_channel(n, seed=args.seed * 100003 + 1000 * n + i)
            rates.append(test_preservation(phi, args.trials, args.seed + i).failures / args.trials)
        print(
            f"random unital n={n}: failure rate min {min(rates):.3f} "
            f"mean {sum(rates) / len(rates):.3f} max {max(rates):.3f}, "
            f"{sum(x > 0 for x in rates)}/{len(rates)} channels with a counterexample"
        )


if __name__ == "__main__":
    main()
