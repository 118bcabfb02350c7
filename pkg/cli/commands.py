"""Command implementations behind the `mipscrypt` entry point."""

from __future__ import annotations

import logging
import sys
import time
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Optional

from pydantic import BaseModel, Field

from ciphers.engine import CipherKind, decrypt_image, encrypt_image, parse_key
from config.settings import get_settings
from isa.assembler import AssembledProgram, assemble, bytes_to_words, disassemble, disassemble_word
from machine.state import MachineState
from metrics.power import make_report
from models.schemas import PipelineConfig, PowerParams, RunReport, RunStatus
from pipeline.core import PipelineSimulator
from pipeline.trace import RunTrace
from services.errors import SimulatorError, UsageError
from utils.monitoring import SimulationLogger

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_CYCLE_CAP = 4

ZERO_KEY = (0, 0, 0, 0)


class CliCommand(str, Enum):
    ASM = "asm"
    DISASM = "disasm"
    ENCRYPT_IMAGE = "encrypt-image"
    RUN = "run"
    REPORT = "report"


class CliConfig(BaseModel):
    command: CliCommand
    cipher: CipherKind = CipherKind.DES
    key: Optional[str] = None
    clock_hz: Optional[int] = Field(default=None, gt=0)
    gating: bool = True
    trace: Optional[Path] = None
    report: Optional[Path] = None
    imem_bytes: Optional[int] = None
    dmem_bytes: Optional[int] = None
    crypto_cycles: Optional[int] = Field(default=None, ge=1)
    max_cycles: Optional[int] = Field(default=None, ge=0)
    encrypted: bool = False
    block_cache: bool = False
    data: Optional[Path] = None

    def key_words(self) -> tuple[int, int, int, int]:
        return parse_key(self.key) if self.key else ZERO_KEY

    def require_key(self) -> tuple[int, int, int, int]:
        if not self.key:
            raise UsageError(f"{self.command.value} needs --key")
        return parse_key(self.key)

    def pipeline_config(self) -> PipelineConfig:
        return PipelineConfig(
            cipher=self.cipher,
            crypto_block_cycles=self.crypto_cycles,
            gating_enabled=self.gating,
            decrypt_ifetch=self.encrypted,
            per_instruction_crypto_charge=not self.block_cache,
        )

    def power_params(self) -> PowerParams:
        settings = get_settings()
        return PowerParams(
            capacitance_farads=settings.capacitance_farads,
            vdd_volts=settings.vdd_volts,
            clock_hz=self.clock_hz or settings.clock_hz_for(self.cipher.value),
        )


@dataclass
class RunOutcome:
    trace: RunTrace
    report: Optional[RunReport]

    @property
    def exit_code(self) -> int:
        return EXIT_CYCLE_CAP if self.trace.status is RunStatus.CYCLE_CAP else EXIT_OK


def _read_bytes(path: Path, what: str) -> bytes:
    try:
        return Path(path).read_bytes()
    except OSError as exc:
        raise UsageError(f"cannot read {what} {path}: {exc.strerror}") from exc


def _read_text(path: Path, what: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot read {what} {path}: {exc.strerror}") from exc


def cmd_asm(
    source: Path,
    out: Path,
    listing: bool = False,
    imem_bytes: Optional[int] = None,
) -> AssembledProgram:
    capacity = imem_bytes or get_settings().imem_bytes
    program = assemble(_read_text(source, "source"), capacity_bytes=capacity)
    Path(out).write_bytes(program.to_bytes())
    if listing:
        for index, word in enumerate(program.words):
            sys.stdout.write(f"0x{index * 4:04x}  {word:08x}  {disassemble_word(word)}\n")
    logger.info("Assembled source=%s words=%s out=%s", source, len(program.words), out)
    return program


def cmd_disasm(image: Path, out: Optional[Path] = None) -> str:
    text = disassemble(bytes_to_words(_read_bytes(image, "image"))) + "\n"
    if out is None:
        sys.stdout.write(text)
    else:
        Path(out).write_text(text, encoding="utf-8")
    return text


def cmd_encrypt_image(
    image: Path,
    out: Path,
    cipher: CipherKind,
    key: str,
    decrypt: bool = False,
) -> bytes:
    """ECB-encrypt an image (NOP-padded to whole blocks), or decrypt one."""
    key_words = parse_key(key)
    payload = _read_bytes(image, "image")
    try:
        if decrypt:
            result = decrypt_image(payload, cipher, key_words)
        else:
            result = encrypt_image(payload, cipher, key_words)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    Path(out).write_bytes(result)
    logger.info(
        "Image %s cipher=%s bytes_in=%s bytes_out=%s",
        "decrypted" if decrypt else "encrypted",
        CipherKind(cipher).value,
        len(payload),
        len(result),
    )
    return result


def cmd_run(image: Path, config: CliConfig) -> RunOutcome:
    settings = get_settings()
    key_words = config.require_key() if config.encrypted else config.key_words()
    payload = _read_bytes(image, "image")
    data = _read_bytes(config.data, "data preload") if config.data else b""

    machine = MachineState(
        cipher=config.cipher,
        imem_bytes=config.imem_bytes or settings.imem_bytes,
        dmem_bytes=config.dmem_bytes or settings.dmem_bytes,
    )
    machine.reset_load(payload, dmem_init=data, keys=key_words).start()

    pipeline_config = config.pipeline_config()
    simulator = PipelineSimulator(machine, pipeline_config, keep_cycles=config.trace is not None)
    max_cycles = config.max_cycles if config.max_cycles is not None else settings.max_cycles

    run_logger = SimulationLogger()
    program = Path(image).name
    run_logger.log_run_start(
        program,
        config.cipher.value,
        {
            "gating": config.gating,
            "encrypted": config.encrypted,
            "crypto_block_cycles": pipeline_config.crypto_block_cycles,
            "max_cycles": max_cycles,
        },
    )
    started = time.perf_counter()
    try:
        trace = simulator.run(max_cycles)
    except SimulatorError as exc:
        run_logger.log_fault(program, exc, simulator.cycle)
        if config.trace is not None:
            simulator.trace(RunStatus.FAULT).write(config.trace)
        raise

    if config.trace is not None:
        trace.write(config.trace)

    report = None
    if trace.summary.retired and trace.summary.cycles:
        report = make_report(trace, config.power_params(), pipeline_config)
        if config.report is not None:
            Path(config.report).write_text(report.to_text(), encoding="utf-8")
        else:
            sys.stdout.write(report.to_text())

    run_logger.log_run_end(program, trace.summary, time.perf_counter() - started)
    return RunOutcome(trace=trace, report=report)


def cmd_report(trace_path: Path, config: CliConfig) -> RunReport:
    """Rebuild a report from a JSON-lines trace."""
    trace = RunTrace.from_jsonl(_read_text(trace_path, "trace"))
    summary = trace.summary
    replay = config.model_copy(update={"cipher": summary.cipher})
    pipeline_config = PipelineConfig(
        cipher=summary.cipher,
        crypto_block_cycles=summary.crypto_block_cycles,
        gating_enabled=summary.gating,
    )
    report = make_report(trace, replay.power_params(), pipeline_config)
    if config.report is not None:
        Path(config.report).write_text(report.to_text(), encoding="utf-8")
    else:
        sys.stdout.write(report.to_text())
    return report
