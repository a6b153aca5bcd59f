"""``modelcollapse run``: run a chain or ensemble and write CSV/JSON outputs.

Exit codes: 0 success, 2 usage error, 1 runtime error.
"""
from __future__ import annotations

import argparse
import json
import logging
import os
import sys
import time
from dataclasses import dataclass, field
from typing import Union

from . import __version__
from .chain import (
    RECORD_FIELDS,
    ChainResult,
    EnsembleResult,
    GenerationRecord,
    preset_config,
    run_chain,
    run_ensemble,
)
from .distributions import PRESETS
from .metrics import histogram_density

log = logging.getLogger(__name__)

CSV_HEADER = ("generation",) + RECORD_FIELDS


@dataclass
class RunManifest:
    config: dict
    chains: int
    files: list = field(default_factory=list)
    duration_seconds: float = 0.0
    version: str = __version__

    def to_dict(self) -> dict:
        return {
            "version": self.version,
            "config": self.config,
            "seed": self.config["seed"],
            "chains": self.chains,
            "duration_seconds": self.duration_seconds,
            "files": self.files,
        }


def _fmt(x) -> str:
    # 17 significant digits round-trips any double
    return "" if x is None else format(float(x), ".17g")


def format_csv(records) -> str:
    lines = [",".join(CSV_HEADER)]
    for r in records:
        lines.append(",".join([str(r.generation)] + [_fmt(getattr(r, f)) for f in RECORD_FIELDS]))
    return "\n".join(lines) + "\n"


def parse_csv(text: str) -> list:
    """Inverse of ``format_csv``."""
    rows = text.strip().splitlines()
    if tuple(rows[0].split(",")) != CSV_HEADER:
        raise ValueError("unexpected metrics.csv header")
    out = []
    for row in rows[1:]:
        gen, *vals = row.split(",")
        out.append(GenerationRecord(int(gen), *[None if v == "" else float(v) for v in vals]))
    return out


def write_outputs(result: Union[ChainResult, EnsembleResult], out_dir,
                  duration: float = 0.0) -> RunManifest:
    os.makedirs(out_dir, exist_ok=True)
    files = []

    def _write(name, text):
        path = os.path.join(out_dir, name)
        with open(path, "w") as fh:
            fh.write(text)
        files.append(path)

    if isinstance(result, EnsembleResult):
        _write("metrics.csv", format_csv(result.records()))
        std_records = [
            GenerationRecord(int(g), **{f: None if result.std[f] is None else result.std[f][k]
                                        for f in RECORD_FIELDS})
            for k, g in enumerate(result.generations)
        ]
        if result.chains > 1:
            _write("metrics_std.csv", format_csv(std_records))
        chains = result.chains
    else:
        _write("metrics.csv", format_csv(result.records))
        for snap in result.snapshots:
            payload = {
                "generation": snap.generation,
                "edges": snap.histogram.edges.tolist(),
                "densities": snap.histogram.densities.tolist(),
                "original_densities": snap.original.densities.tolist(),
            }
            _write(f"snapshot_{snap.generation}.json", json.dumps(payload, indent=1))
        chains = 1

    manifest = RunManifest(config=result.config.to_dict(), chains=chains,
                           duration_seconds=duration)
    manifest.files = files + [os.path.join(out_dir, "manifest.json")]
    _write("manifest.json", json.dumps(manifest.to_dict(), indent=2))
    return manifest


def _positive_int(s):
    try:
        v = int(s)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {s!r}")
    if v < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {v}")
    return v


def _positive_float(s):
    try:
        v = float(s)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a number, got {s!r}")
    if not v > 0:
        raise argparse.ArgumentTypeError(f"must be > 0, got {v}")
    return v


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="modelcollapse",
                                     description="Recursive fit/resample collapse experiments.")
    sub = parser.add_subparsers(dest="command", required=True)
    run = sub.add_parser("run", help="run a chain (or an ensemble of chains)")
    run.add_argument("--preset", choices=sorted(PRESETS), default="two-gauss-uniform")
    run.add_argument("--estimator", choices=("kde", "gaussian"), default="kde")
    run.add_argument("--bandwidth", type=_positive_float, default=None,
                     help="KDE bandwidth (default 0.5; 0.1 for gauss1d)")
    run.add_argument("--iterations", type=_positive_int, default=None,
                     help="generations to run (default 30; 300 for gauss1d)")
    run.add_argument("--sample-size", type=_positive_int, default=None,
                     help="samples per generation (default 30000; 1000 for gauss1d)")
    run.add_argument("--kl-bins", type=_positive_int, default=None, help="default 100")
    run.add_argument("--snapshot-every", type=_positive_int, default=None,
                     help="histogram snapshot cadence (default 3; 12 for gauss1d)")
    run.add_argument("--seed", type=int, default=0)
    run.add_argument("--chains", type=_positive_int, default=1)
    run.add_argument("--out", default="results")
    return parser


def parse_args(argv=None):
    """Returns ``(ChainConfig, namespace)``; usage errors exit with status 2."""
    parser = build_parser()
    ns = parser.parse_args(argv)
    try:
        config = preset_config(
            ns.preset,
            estimator=ns.estimator,
            bandwidth=ns.bandwidth,
            iterations=ns.iterations,
            sample_size=ns.sample_size,
            kl_bins=ns.kl_bins,
            snapshot_every=ns.snapshot_every,
            seed=ns.seed,
        )
    except ValueError as exc:
        parser.error(str(exc))
    return config, ns


def main(argv=None) -> int:
    logging.basicConfig(level=logging.INFO, format="%(message)s")
    config, ns = parse_args(argv)
    t0 = time.perf_counter()
    try:
        if ns.chains > 1:
            result = run_ensemble(config, ns.chains)
        else:
            result = run_chain(config)
        manifest = write_outputs(result, ns.out, duration=time.perf_counter() - t0)
    except (OSError, ValueError) as exc:
        print(f"modelcollapse: error: {exc}", file=sys.stderr)
        return 1
    log.info("wrote %d files to %s (%.1fs)", len(manifest.files), ns.out,
             manifest.duration_seconds)
    return 0


if __name__ == "__main__":
    sys.exit(main())
