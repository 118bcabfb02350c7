#!/usr/bin/env python3
"""Print per-cipher clock, data length, throughput and latency as a table."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

PROJECT_ROOT = Path(__file__).resolve().parents[1]
if str(PROJECT_ROOT) not in sys.path:
    sys.path.insert(0, str(PROJECT_ROOT))

from tabulate import tabulate

from metrics.tables import REDUCED_VDD, cipher_performance_rows

HEADERS = {
    "cipher": "Crypto processor",
    "data_length_bits": "Data length (bits)",
    "clock_mhz": "Speed (MHz)",
    "period_ns": "Period (ns)",
    "throughput_mbps": "Throughput (Mbit/s)",
    "latency_cycles": "Latency (cycles)",
    "latency_r": "R",
    "latency_i": "I",
    "latency_j": "J",
    "power_w": "Dyn. power @ nominal (W)",
    "power_w_reduced_vdd": "Dyn. power @ reduced Vdd (W)",
}


def render(rows: list[dict], table_format: str = "github") -> str:
    return tabulate(
        [[row[key] for key in HEADERS] for row in rows],
        headers=list(HEADERS.values()),
        tablefmt=table_format,
        floatfmt=".4g",
    )


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--e-sw", type=float, default=0.2, help="Activity factor for the power columns.")
    parser.add_argument("--reduced-vdd", type=float, default=REDUCED_VDD)
    parser.add_argument("--format", default="github", help="Any tabulate table format.")
    args = parser.parse_args()

    rows = cipher_performance_rows(e_sw=args.e_sw, reduced_vdd=args.reduced_vdd)
    print(render(rows, args.format))


if __name__ == "__main__":
    main()
