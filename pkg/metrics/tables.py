"""Per-cipher speed / throughput / latency rows."""

from __future__ import annotations

from typing import Any, Optional

from ciphers.engine import CipherKind
from config.settings import Settings, get_settings
from metrics.power import LOAD_BASE_CYCLES, dynamic_power, throughput
from models.schemas import PowerParams

ALU_BASE_CYCLES = 4
CONTROL_BASE_CYCLES = 3
REDUCED_VDD = 1.2


def cipher_performance_rows(
    settings: Optional[Settings] = None,
    e_sw: float = 0.2,
    reduced_vdd: float = REDUCED_VDD,
) -> list[dict[str, Any]]:
    """Rows for DES, TDES and AES at their configured clocks and crypto latencies.

    Power columns are estimates for the given activity factor at the nominal
    supply and at `reduced_vdd`.
    """
    settings = settings or get_settings()
    rows = []
    for kind in CipherKind:
        clock_hz = settings.clock_hz_for(kind.value)
        crypto = settings.crypto_cycles_for(kind.value)
        latency = LOAD_BASE_CYCLES + crypto
        nominal = PowerParams(
            capacitance_farads=settings.capacitance_farads,
            vdd_volts=settings.vdd_volts,
            clock_hz=clock_hz,
        )
        reduced = PowerParams(
            capacitance_farads=settings.capacitance_farads,
            vdd_volts=reduced_vdd,
            clock_hz=clock_hz,
        )
        rows.append(
            {
                "cipher": kind.value.upper(),
                "data_length_bits": kind.block_bits,
                "clock_mhz": clock_hz / 1e6,
                "period_ns": round(1e9 / clock_hz, 2),
                "throughput_mbps": throughput(clock_hz, kind.block_bits, latency),
                "latency_cycles": latency,
                "latency_r": ALU_BASE_CYCLES + crypto,
                "latency_i": latency,
                "latency_j": CONTROL_BASE_CYCLES + crypto,
                "power_w": dynamic_power(nominal, e_sw),
                "power_w_reduced_vdd": dynamic_power(reduced, e_sw),
            }
        )
    return rows
