#!/usr/bin/env python3
"""Run the bundled overloaded channel scenario (offered load = 2x capacity).

Compares the value scheduler against the FIFO baseline; writes
results/overload_metrics.csv and results/overload_log.csv.
"""

import pathlib
import sys

from voinet.cli import main

ROOT = pathlib.Path(__file__).resolve().parent.parent
OUT = ROOT / "results"

if __name__ == "__main__":
    OUT.mkdir(exist_ok=True)
    sys.exit(
        main(
            [
                "simulate",
                "--scenario", str(ROOT / "configs" / "overload_scenario.json"),
                "--out", str(OUT / "overload_metrics.csv"),
                "--log", str(OUT / "overload_log.csv"),
            ]
        )
    )
