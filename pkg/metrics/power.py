"""Dynamic power, throughput and run reports."""

from __future__ import annotations

import logging
import math
from fractions import Fraction

from metrics.activity import switching_factor
from models.schemas import PipelineConfig, PowerParams, RunReport
from pipeline.trace import RunTrace
from services.errors import ReportError

logger = logging.getLogger(__name__)

# Completion stage of a data-memory load without crypto stalls.
LOAD_BASE_CYCLES = 5


def dynamic_power(params: PowerParams, e_sw: float) -> float:
    """P = 0.5 * C * Vdd^2 * E(sw) * F_clk, in watts."""
    if e_sw < 0:
        raise ReportError(f"activity factor must be non-negative, got {e_sw}")
    for name in ("capacitance_farads", "vdd_volts", "clock_hz"):
        if getattr(params, name) <= 0:
            raise ReportError(f"{name} must be positive")
    return 0.5 * params.capacitance_farads * params.vdd_volts**2 * e_sw * params.clock_hz


def throughput(clock_hz: float, block_bits: int, latency_cycles: int) -> int:
    """Mbit/s as floor(clock * block_bits / latency / 10^6)."""
    if latency_cycles == 0:
        raise ReportError("latency must be non-zero")
    if clock_hz <= 0 or block_bits <= 0 or latency_cycles < 0:
        raise ReportError(
            f"throughput needs positive inputs, got clock={clock_hz} "
            f"bits={block_bits} latency={latency_cycles}"
        )
    return math.floor(Fraction(clock_hz) * block_bits / (latency_cycles * 10**6))


def make_report(trace: RunTrace, params: PowerParams, config: PipelineConfig) -> RunReport:
    summary = trace.summary
    if summary.retired == 0 or summary.cycles == 0:
        raise ReportError("cannot report on an empty trace")
    if summary.latch_bits <= 0:
        raise ReportError("trace carries no latch width")

    e_sw = switching_factor(summary.toggles, summary.latch_bits, summary.cycles)
    latency_i = summary.latency_i or LOAD_BASE_CYCLES + config.crypto_block_cycles
    report = RunReport(
        cipher=config.cipher,
        clock_hz=int(params.clock_hz),
        cycles=summary.cycles,
        retired_r=summary.retired_r,
        retired_i=summary.retired_i,
        retired_j=summary.retired_j,
        latency_r=summary.latency_r,
        latency_i=summary.latency_i,
        latency_j=summary.latency_j,
        e_sw=e_sw,
        power_w=dynamic_power(params, e_sw),
        throughput_mbps=throughput(params.clock_hz, config.cipher.block_bits, latency_i),
        gating=summary.gating,
    )
    logger.info(
        "Report built cipher=%s cycles=%s e_sw=%.6f throughput_mbps=%s",
        report.cipher.value,
        report.cycles,
        report.e_sw,
        report.throughput_mbps,
    )
    return report
