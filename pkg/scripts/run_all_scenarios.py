"""Run every bundled scenario and print the stop-error table.

Usage: python3 scripts/run_all_scenarios.py [--out DIR]

With --out, also writes per-scenario trajectory CSVs and summaries.
"""

import argparse
import glob
import os

from balisim.sim import scenario

SCENARIO_DIR = os.path.join(
    os.path.dirname(os.path.dirname(os.path.abspath(__file__))),
    "src", "balisim", "scenarios")

ORDER = [
    "no_attack",
    "tamper_b1_legacy",
    "clone_b1b2_full_brake",
    "clone_b1b2_ignore",
    "availability_b1_hoa",
    "tamper_b1_resilient_pest120",
    "tamper_b1_resilient_pest80",
    "clone_b1b2_resilient",
    "clone_b1b2_resilient_pest80",
    "availability_b1_resilient",
]


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--out", help="directory for CSV/summary artifacts")
    args = parser.parse_args()

    paths = {os.path.splitext(os.path.basename(p))[0]: p
             for p in glob.glob(os.path.join(SCENARIO_DIR, "*.json"))}
    names = ORDER + sorted(set(paths) - set(ORDER))

    print(f"{'scenario':34s} {'stop_error':>10s} {'stop_time':>9s} "
          f"{'switches':>8s} {'auth_fail':>9s}")
    for name in names:
        cfg = scenario.load_config(paths[name])
        result = scenario.run_scenario(cfg)
        print(f"{name:34s} {result.stop_error:+10.3f} "
              f"{result.stop_time:8.2f}s {result.mode_switches:8d} "
              f"{result.auth_failures:9d}")
        if args.out:
            out_dir = os.path.join(args.out, name)
            os.makedirs(out_dir, exist_ok=True)
            scenario.write_trajectory_csv(
                result, os.path.join(out_dir, "trajectory.csv"))
            scenario.write_summary(
                result, os.path.join(out_dir, "summary.json"))


if __name__ == "__main__":
    main()
