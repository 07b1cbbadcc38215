"""Sweep error weights and report median/95th-percentile explored nodes.

Compares the height-bound decoder against plain breadth-first exploration,
reproducing the linear-vs-exponential separation between them.

Example:
    python3 scripts/median_nodes.py --code color:7 --weights 1 2 3 --trials 2000
"""

import argparse
import itertools
import math
import sys

import numpy as np

from treedec import DecoderSpec, make_decoder, percentile_nearest_rank, sample_fixed_weight, syndrome_of
from treedec.cli import parse_code


def cases_for(n, w, trials, seed):
    if trials is None or math.comb(n, w) <= trials:
        return list(itertools.combinations(range(n), w))
    rng = np.random.default_rng(seed)
    return [tuple(sorted(sample_fixed_weight(n, w, rng))) for _ in range(trials)]


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--code", default="color:5", help="color:D | bb:gross | bb:L,M,A,B")
    parser.add_argument("--weights", type=int, nargs="+", default=[1, 2])
    parser.add_argument("--trials", type=int, default=2000, help="per-weight sample cap")
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--decoders", nargs="+", default=["height-bound", "bf"])
    args = parser.parse_args()

    code = parse_code(args.code)
    problem = code.problem_x()
    print(f"code {args.code}: n={code.n} k={code.k} d={code.d}")
    header = f"{'decoder':>24} {'w':>3} {'cases':>7} {'median':>7} {'p95':>7} {'max':>7}"
    print(header)
    print("-" * len(header))
    for name in args.decoders:
        decode = make_decoder(problem, DecoderSpec(name))
        for w in args.weights:
            nus = []
            for faults in cases_for(code.n, w, args.trials, args.seed + w):
                out = decode(syndrome_of(problem.H, faults))
                if not out.found:
                    print(f"warning: {name} returned {out.status} on {faults}", file=sys.stderr)
                    continue
                nus.append(out.nu)
            print(
                f"{name:>24} {w:>3} {len(nus):>7} "
                f"{percentile_nearest_rank(nus, 50):>7} "
                f"{percentile_nearest_rank(nus, 95):>7} {max(nus):>7}"
            )


if __name__ == "__main__":
    main()
