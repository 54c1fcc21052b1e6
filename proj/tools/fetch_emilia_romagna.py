#!/usr/bin/env python3
"""Builds tests/fixtures/emilia_romagna_2022.csv from the Italian Civil Protection COVID-19 data.

Source: regional daily bulletin, https://github.com/pcm-dpc/COVID-19 (dati-regioni).
Extraction: rows with denominazione_regione == "Emilia-Romagna" dated 2022-01-01 .. 2022-12-31,
one row per day (365 rows), columns:

    data                  ISO date (YYYY-MM-DD)
    totale_ospedalizzati  patients currently hospitalised (ordinary wards plus intensive care)
    ricoverati_con_sintomi
    terapia_intensiva

The analysis uses totale_ospedalizzati:

    ssa_autogroup analyze --input tests/fixtures/emilia_romagna_2022.csv \\
        --value-col totale_ospedalizzati --label-col data --window 7

Usage: fetch_emilia_romagna.py [--source FILE_OR_URL] [--out PATH]
"""

import argparse
import csv
import io
import sys
import urllib.request
from pathlib import Path

DEFAULT_SOURCE = (
    "https://raw.githubusercontent.com/pcm-dpc/COVID-19/master/dati-regioni/dpc-covid19-ita-regioni.csv"
)
REGION = "Emilia-Romagna"
YEAR = "2022"
COLUMNS = ["totale_ospedalizzati", "ricoverati_con_sintomi", "terapia_intensiva"]


def read_source(source: str) -> str:
    if source.startswith(("http://", "https://")):
        with urllib.request.urlopen(source, timeout=60) as response:
            return response.read().decode("utf-8")
    return Path(source).read_text(encoding="utf-8")


def extract(text: str) -> list[dict[str, str]]:
    rows = {}
    for record in csv.DictReader(io.StringIO(text)):
        if record["denominazione_regione"] != REGION:
            continue
        day = record["data"][:10]
        if day.startswith(YEAR):
            rows[day] = {"data": day, **{c: record[c] for c in COLUMNS}}
    return [rows[d] for d in sorted(rows)]


def main() -> int:
    root = Path(__file__).resolve().parent.parent
    parser = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    parser.add_argument("--source", default=DEFAULT_SOURCE)
    parser.add_argument("--out", type=Path, default=root / "tests" / "fixtures" / "emilia_romagna_2022.csv")
    args = parser.parse_args()

    rows = extract(read_source(args.source))
    if len(rows) != 365:
        print(f"expected 365 daily rows for {REGION} {YEAR}, found {len(rows)}", file=sys.stderr)
        return 1
    with args.out.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.DictWriter(fh, fieldnames=["data", *COLUMNS], lineterminator="\n")
        writer.writeheader()
        writer.writerows(rows)
    print(f"wrote {len(rows)} rows to {args.out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
