#!/usr/bin/env python3
"""Writes tests/fixtures/f1_snr5.csv: sin(2*pi*t/3) plus Gaussian noise at SNR 5, N = 50."""

import csv
import math
import random
import statistics
import sys
from pathlib import Path

N = 50
SNR = 5.0
SEED = 20240611


def main(out: Path) -> None:
    signal = [math.sin(2.0 * math.pi * t / 3.0) for t in range(1, N + 1)]
    sd = math.sqrt(statistics.variance(signal) / SNR)
    rng = random.Random(SEED)
    with out.open("w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["t", "value"])
        for t, f in enumerate(signal, start=1):
            writer.writerow([t, repr(f + rng.gauss(0.0, sd))])


if __name__ == "__main__":
    default = Path(__file__).resolve().parent.parent / "tests" / "fixtures" / "f1_snr5.csv"
    main(Path(sys.argv[1]) if len(sys.argv) > 1 else default)
