#!/usr/bin/env python3
"""Sweep gamma over the full Saaty range for the bundled safety config.

Writes results/sweep_safety.csv and prints the consistent gamma region.
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
                "sweep",
                "--config", str(ROOT / "configs" / "safety.json"),
                "--steps", "1000",
                "--out", str(OUT / "sweep_safety.csv"),
            ]
        )
    )
