"""KDE mode counts at generation 0 and after N KDE generations, with and
without discarding maxima below a fraction of the main peak."""
import argparse

from modelcollapse.chain import count_modes, preset_config, run_chain
from modelcollapse.distributions import MIXTURE_PRESETS


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--iterations", type=int, default=30)
    ap.add_argument("--seeds", type=int, default=10)
    ap.add_argument("--min-height", type=float, default=0.05)
    args = ap.parse_args()

    for name in MIXTURE_PRESETS:
        raw, filtered = [], []
        for seed in range(1, args.seeds + 1):
            r = run_chain(preset_config(name, iterations=args.iterations, seed=seed,
                                        snapshot_every=10**9))
            raw.append((count_modes(r.original, 0.5), count_modes(r.final, 0.5)))
            filtered.append((count_modes(r.original, 0.5, min_relative_height=args.min_height),
                             count_modes(r.final, 0.5, min_relative_height=args.min_height)))
        print(f"{name}\n  all maxima        {raw}\n  >= {args.min_height:.0%} of peak   {filtered}")


if __name__ == "__main__":
    main()
