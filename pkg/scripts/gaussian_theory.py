"""Moment-matching chain ensemble against the closed-form predictions.

Prints, per checkpoint generation, the ensemble mean of the within-chain
unbiased variance, the pooled variance of all generation-n samples across
chains, and the predicted marginal variance; then single-step W2^2 mean and
variance against the leading-order formulas.
"""
import argparse

import numpy as np

from modelcollapse.chain import ChainConfig, run_ensemble
from modelcollapse.distributions import MixtureSpec, Normal
from modelcollapse.theory import SampleSchedule, expected_w2_squared, variance_of_w2_squared


def config(m, n, seed):
    return ChainConfig(source=MixtureSpec((Normal(0, 1, m),)), estimator="gaussian",
                       iterations=n, sample_size=m, snapshot_every=10**9, seed=seed)


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--m", type=int, default=1000)
    ap.add_argument("--n", type=int, default=300)
    ap.add_argument("--chains", type=int, default=200)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    e = run_ensemble(config(args.m, args.n, args.seed), args.chains)
    print(f"{'n':>5}{'mean s^2':>11}{'pooled':>10}{'1+n/M':>9}{'var(mean)':>11}{'(n+1)/M':>9}")
    for n in sorted({1, args.n // 6, args.n // 3, args.n // 2, args.n} - {0}):
        k = n - 1
        print(f"{n:>5}{e.mean['sample_variance'][k]:>11.4f}{e.pooled_variance[k]:>10.4f}"
              f"{1 + n / args.m:>9.4f}{e.values['sample_mean'][:, k].var():>11.5f}"
              f"{(n + 1) / args.m:>9.5f}")

    for m, chains in ((100, 2000), (1000, 10_000)):
        s = run_ensemble(config(m, 1, args.seed + 1), chains)
        w = s.values["gaussian_w2sq"][:, 0]
        sched = SampleSchedule((m,))
        print(f"M={m}: E[W2^2] {w.mean():.3e} (formula {expected_w2_squared(sched):.3e}); "
              f"Var[W2^2] {w.var():.3e} (formula {variance_of_w2_squared(sched):.3e}, "
              f"2.5/M^2 = {2.5 / m**2:.3e})")


if __name__ == "__main__":
    main()
