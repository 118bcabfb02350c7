"""Pydantic schemas for run configuration, traces and reports."""

from __future__ import annotations

from enum import Enum
from typing import Any, Optional

from pydantic import BaseModel, ConfigDict, Field, model_validator

from ciphers.engine import CipherKind
from config.settings import get_settings
from services.errors import ReportError


class RunStatus(str, Enum):
    HALTED = "halted"
    CYCLE_CAP = "cycle_cap"
    FAULT = "fault"


# Configuration
class PipelineConfig(BaseModel):
    model_config = ConfigDict(frozen=True)

    cipher: CipherKind = CipherKind.DES
    crypto_block_cycles: int = Field(ge=1)
    gating_enabled: bool = True
    decrypt_ifetch: bool = False
    per_instruction_crypto_charge: bool = True

    @model_validator(mode="before")
    @classmethod
    def _default_crypto_cycles(cls, data: Any) -> Any:
        if isinstance(data, dict) and data.get("crypto_block_cycles") is None:
            cipher = CipherKind(data.get("cipher", CipherKind.DES))
            data = {
                **data,
                "crypto_block_cycles": get_settings().crypto_cycles_for(cipher.value),
            }
        return data


class PowerParams(BaseModel):
    model_config = ConfigDict(frozen=True)

    capacitance_farads: float = Field(default=1e-9, gt=0)
    vdd_volts: float = Field(default=1.5, gt=0)
    clock_hz: float = Field(default=218_000_000, gt=0)


# Trace records
class CycleRecord(BaseModel):
    cycle: int
    stages: dict[str, str]
    stall: bool = False
    flush: bool = False
    crypt: bool = False
    gated: bool = False
    toggles: int = 0


class RetiredInstruction(BaseModel):
    seq: int
    pc: int
    word: int
    name: str
    format: str
    latency_class: str
    fetch_cycle: int = 0
    complete_cycle: int = 0
    stall_cycles: int = 0
    latency: int = 0
    reg: Optional[int] = None
    reg_value: Optional[int] = None
    mem_address: Optional[int] = None
    mem_value: Optional[int] = None
    key_slot: Optional[int] = None
    key_value: Optional[int] = None

    def architectural(self) -> tuple:
        """The fields every correct executor must agree on."""
        return (
            self.pc,
            self.word,
            self.reg,
            self.reg_value,
            self.mem_address,
            self.mem_value,
            self.key_slot,
            self.key_value,
        )


class TraceSummary(BaseModel):
    status: RunStatus
    cipher: CipherKind
    gating: bool
    crypto_block_cycles: int
    cycles: int
    retired_r: int = 0
    retired_i: int = 0
    retired_j: int = 0
    latency_r: int = 0
    latency_i: int = 0
    latency_j: int = 0
    toggles: int = 0
    latch_bits: int = 0
    gated_cycles: int = 0
    stalls: int = 0
    flushes: int = 0
    pc: int = 0
    registers: list[int] = Field(default_factory=list)

    @property
    def retired(self) -> int:
        return self.retired_r + self.retired_i + self.retired_j


# Reports
REPORT_FIELDS = (
    "cipher",
    "clock_hz",
    "cycles",
    "retired_r",
    "retired_i",
    "retired_j",
    "latency_r",
    "latency_i",
    "latency_j",
    "e_sw",
    "power_w",
    "throughput_mbps",
    "gating",
)


class RunReport(BaseModel):
    cipher: CipherKind
    clock_hz: int
    cycles: int
    retired_r: int
    retired_i: int
    retired_j: int
    latency_r: int
    latency_i: int
    latency_j: int
    e_sw: float = Field(ge=0, le=1)
    power_w: float = Field(ge=0)
    throughput_mbps: int
    gating: bool

    def to_text(self) -> str:
        """One `key=value` line per field, in a fixed order."""
        lines = []
        for name in REPORT_FIELDS:
            value = getattr(self, name)
            if name == "cipher":
                value = value.value
            elif name == "gating":
                value = "on" if value else "off"
            elif isinstance(value, float):
                value = repr(value)
            lines.append(f"{name}={value}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "RunReport":
        values: dict[str, str] = {}
        for raw in text.splitlines():
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            name, sep, value = line.partition("=")
            if not sep:
                raise ReportError(f"malformed report line {raw!r}")
            values[name.strip()] = value.strip()

        missing = [name for name in REPORT_FIELDS if name not in values]
        if missing:
            raise ReportError(f"report is missing fields: {', '.join(missing)}")
        gating = values["gating"]
        if gating not in ("on", "off"):
            raise ReportError(f"gating must be on or off, got {gating!r}")
        return cls(**{**values, "gating": gating == "on"})
