"""Compare decoders by cutoff-time failure curves on one code and error rate.

Runs a timed benchmark per decoder, then reports the failure probability as a
function of the decoding time budget (timeouts and wrong corrections both
count as failures).

Example:
    python3 scripts/cutoff_compare.py --code color:5 --p 0.02 --trials 5000
"""

import argparse
import time

from treedec import (
    DecoderSpec,
    NoiseModel,
    WeightVector,
    cutoff_curve,
    evaluate,
)
from treedec.cli import parse_code


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--code", default="color:5")
    parser.add_argument("--p", type=float, default=0.02)
    parser.add_argument("--trials", type=int, default=5000)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--decoders", nargs="+", default=["bp-dtd", "bp-osd"])
    parser.add_argument(
        "--cutoffs-us", type=float, nargs="+",
        default=[10, 30, 100, 300, 1000, 3000, 10000, 100000],
    )
    args = parser.parse_args()

    code = parse_code(args.code)
    weights = WeightVector.from_priors([args.p] * code.n)
    problem = code.problem_x(weights)
    noise = NoiseModel()
    curves = {}
    for name in args.decoders:
        t0 = time.time()
        stats, records = evaluate(
            problem, DecoderSpec(name), noise, args.trials, master_seed=args.seed
        )
        curves[name] = cutoff_curve(records, [int(us * 1000) for us in args.cutoffs_us])
        print(
            f"# {name}: p_l={stats.p_l:.5f} "
            f"wilson=({stats.wilson_lo:.5f},{stats.wilson_hi:.5f}) "
            f"wall={time.time() - t0:.1f}s"
        )
    header = ["cutoff_us"] + args.decoders
    print(",".join(str(h) for h in header))
    for idx, us in enumerate(args.cutoffs_us):
        row = [str(us)] + [f"{curves[name][idx][1]:.5f}" for name in args.decoders]
        print(",".join(row))


if __name__ == "__main__":
    main()
