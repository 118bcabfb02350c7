"""Structured logging helpers for simulation runs."""

from __future__ import annotations

import logging
from datetime import datetime
from typing import Any

from pythonjsonlogger import jsonlogger

from models.schemas import TraceSummary
from services.errors import SimulatorError

PLAIN_FORMAT = "%(asctime)s %(levelname)s %(name)s - %(message)s"


def configure_logging(level: str = "WARNING", json_output: bool = False) -> None:
    """Install one root handler; JSON lines when `json_output` is set."""
    root = logging.getLogger()
    for handler in list(root.handlers):
        root.removeHandler(handler)

    handler = logging.StreamHandler()
    if json_output:
        handler.setFormatter(jsonlogger.JsonFormatter())
    else:
        handler.setFormatter(logging.Formatter(PLAIN_FORMAT))
    root.addHandler(handler)
    root.setLevel(level.upper())


class SimulationLogger:
    """Emit JSON-structured run lifecycle events."""

    def __init__(self, name: str = "mipscrypt.runs", log_file: str | None = None):
        self.logger = logging.getLogger(name)

        if self.logger.handlers or log_file is None:
            return

        file_handler = logging.FileHandler(log_file)
        file_handler.setFormatter(jsonlogger.JsonFormatter())
        self.logger.addHandler(file_handler)

    def log_run_start(
        self,
        program: str,
        cipher: str,
        params: dict[str, Any] | None = None,
    ) -> None:
        self.logger.info(
            "run_started",
            extra={
                "program": program,
                "cipher": cipher,
                "timestamp": datetime.now().isoformat(),
                "params": params or {},
            },
        )

    def log_run_end(self, program: str, summary: TraceSummary, duration_seconds: float) -> None:
        self.logger.info(
            "run_completed",
            extra={
                "program": program,
                "cipher": summary.cipher.value,
                "status": summary.status.value,
                "cycles": summary.cycles,
                "retired": summary.retired,
                "stalls": summary.stalls,
                "flushes": summary.flushes,
                "gated_cycles": summary.gated_cycles,
                "toggles": summary.toggles,
                "duration_seconds": round(duration_seconds, 6),
            },
        )

    def log_fault(self, program: str, error: SimulatorError, cycles_run: int) -> None:
        """Record a run that stopped on an error; pc and cycle come from the fault when known."""
        pc = getattr(error, "pc", None)
        self.logger.error(
            "run_failed",
            extra={
                "program": program,
                "fault": type(error).__name__,
                "detail": error.detail,
                "exit_code": error.exit_code,
                "pc": f"0x{pc:08x}" if pc is not None else None,
                "cycle": getattr(error, "cycle", None),
                "cycles_run": cycles_run,
                "word": getattr(error, "word", None),
                "address": getattr(error, "address", None),
            },
        )
