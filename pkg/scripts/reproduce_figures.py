#!/usr/bin/env python3
"""
Write the probability-vs-theta series behind the two sets of sweep plots.

Overlays: (m, n) = (3, 2), (3, 3), (4, 2) on ports (1, 2).
Port pairs: (3, 2) on every pair a < b.
One CSV per curve lands in the output directory, plus a JSON summary of
the refined extrema.
"""

import argparse
import logging
import sys
from pathlib import Path

# Add src to path so we can import our modules
sys.path.insert(0, str(Path(__file__).parent.parent / "src"))

from pydantic import TypeAdapter  # noqa: E402

from core import settings  # noqa: E402
from optics.sweep import (  # noqa: E402
    default_grid,
    sweep_configs,
    sweep_port_pairs,
    with_extrema,
    write_csv,
)
from schema import ALL_TARGETS, Extremum, GridSpec, TargetKind  # noqa: E402

OVERLAY_CONFIGS = [(3, 2), (3, 3), (4, 2)]
PAIR_CONFIG = (3, 2)

ExtremaSummary = TypeAdapter(dict[str, dict[TargetKind, list[Extremum]]])


def main() -> int:
    parser = argparse.ArgumentParser(description="Reproduce the theta sweep series.")
    parser.add_argument("--outdir", type=Path, default=Path("results"), help="Output directory.")
    parser.add_argument("--grid", help="Theta grid lo:hi:count (default from settings).")
    args = parser.parse_args()

    logging.basicConfig(level=settings.LOG_LEVEL.to_logging_level())
    grid = GridSpec.parse(args.grid) if args.grid else default_grid()
    args.outdir.mkdir(parents=True, exist_ok=True)

    summary: dict[str, dict[TargetKind, list[Extremum]]] = {}
    for result in sweep_configs(OVERLAY_CONFIGS, (1, 2), ALL_TARGETS, grid, noon_photons=2):
        result = with_extrema(result)
        path = args.outdir / f"overlay_m{result.m}_n{result.n}.csv"
        write_csv(result, path)
        summary[path.stem] = result.extrema
        print(f"Wrote {path}")

    m, n = PAIR_CONFIG
    for (a, b), result in sweep_port_pairs(m, n, ALL_TARGETS, grid).items():
        result = with_extrema(result)
        path = args.outdir / f"pairs_m{m}_n{n}_keep{a}{b}.csv"
        write_csv(result, path)
        summary[path.stem] = result.extrema
        print(f"Wrote {path}")

    extrema_path = args.outdir / "extrema.json"
    extrema_path.write_bytes(ExtremaSummary.dump_json(summary, indent=2) + b"\n")
    print(f"Wrote {extrema_path}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
