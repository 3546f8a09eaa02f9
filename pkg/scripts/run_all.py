"""Run the built-in suite for S^2 and S^3 and print one line per report.

Usage: python3 scripts/run_all.py [OUT_DIR]
"""
import sys
from pathlib import Path

from scatterlab.harness.runner import run, write_outputs
from scatterlab.harness.suites import default_suite


def main(out_dir: Path) -> int:
    ok = True
    for d in (2, 3):
        for cfg in default_suite(d):
            cfg.output_format = "both"
            report = run(cfg)
            write_outputs(report, cfg, out_dir)
            passed = sum(r.passed for r in report.rows)
            print(f"{'PASS' if report.passed else 'FAIL'} {cfg.name:24s} {passed}/{len(report.rows)}")
            ok &= report.passed
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main(Path(sys.argv[1]) if len(sys.argv) > 1 else Path("out")))
