#!/usr/bin/env python3
"""
Runs every controller strategy over the benchmark suites and writes one
summary table (one report row per suite and strategy).

Usage: python scripts/run_benchmarks.py --out runs/benchmarks
Example: python scripts/run_benchmarks.py --suites room wall-pass --strategies default pid step --frames 60
"""
import argparse
import logging
import os
import sys

# Add project root to path to resolve imports
sys.path.insert(0, os.getcwd())

from slam_booster.config.run_config import STRATEGIES, RunConfig  # noqa: E402
from slam_booster.core.runner import BoosterRunner  # noqa: E402
from slam_booster.simulation.suites import BENCHMARK_SUITES, suite_dataset  # noqa: E402
from slam_booster.storage.results import ensure_output_dir, report_table, write_table  # noqa: E402

# --- Logging Setup ---
logging.basicConfig(level=logging.INFO, format="%(asctime)s - %(levelname)s - %(message)s", stream=sys.stdout)
logger = logging.getLogger(__name__)


def run_benchmarks(suites, strategies, precision, frames, out_dir):
    """Run each (suite, strategy) pair once and write benchmarks.csv under out_dir."""
    reports = []
    for suite in suites:
        logger.info(f"Simulating {suite}")
        dataset = suite_dataset(suite, frame_count=frames)
        for strategy in strategies:
            config = RunConfig().with_controller(strategy=strategy, precision_mode=precision)
            result = BoosterRunner(config).run(dataset, name=suite)
            report = result.report
            logger.info(
                f"{suite:10s} {strategy:18s} ATE {report.ate_m * 100:.2f} cm, "
                f"mean frame {report.mean_frame_ns / 1e6:.1f} ms, {report.tracked_pct:.0f}% tracked"
            )
            reports.append(report)

    target = ensure_output_dir(out_dir)
    table = report_table(reports)
    table.insert(0, "suite", [report.config["dataset_name"] for report in reports])
    path = write_table(target / "benchmarks.csv", table)
    logger.info(f"Wrote {len(reports)} rows to {path}")
    return path


def main():
    parser = argparse.ArgumentParser(description="Benchmark controller strategies on the shipped suites")
    parser.add_argument("--suites", nargs="+", default=list(BENCHMARK_SUITES), help="Suites to run")
    parser.add_argument(
        "--strategies", nargs="+", default=["default", "pid", "step"], choices=STRATEGIES, help="Strategies to compare"
    )
    parser.add_argument("--precision", choices=["full", "reduced"], default="full", help="Precision mode")
    parser.add_argument("--frames", type=int, default=None, help="Resample each suite to this many frames")
    parser.add_argument("--out", default="runs/benchmarks", help="Output directory")
    args = parser.parse_args()

    try:
        run_benchmarks(args.suites, args.strategies, args.precision, args.frames, args.out)
    except Exception as e:
        logger.error(f"Benchmark failed: {e}", exc_info=True)
        sys.exit(1)


if __name__ == "__main__":
    main()
