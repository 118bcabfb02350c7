#!/usr/bin/env python3
"""Command-line driver: assemble, encrypt images, run and report.

Exit statuses: 0 success, 1 usage error, 2 assembly error, 3 simulation
fault, 4 cycle cap reached.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path
from typing import Optional, Sequence

from pydantic import ValidationError

from cli.commands import (
    EXIT_OK,
    CliCommand,
    CliConfig,
    cmd_asm,
    cmd_disasm,
    cmd_encrypt_image,
    cmd_report,
    cmd_run,
)
from ciphers.engine import CipherKind
from config.settings import get_settings
from services.errors import SimulatorError, UsageError
from utils.monitoring import configure_logging

logger = logging.getLogger(__name__)


class _Parser(argparse.ArgumentParser):
    """Report bad arguments as a usage error instead of exiting with status 2."""

    def error(self, message: str):  # type: ignore[override]
        self.print_usage(sys.stderr)
        raise UsageError(message)


def _on_off(value: str) -> bool:
    lowered = value.lower()
    if lowered not in ("on", "off"):
        raise argparse.ArgumentTypeError(f"expected on or off, got {value!r}")
    return lowered == "on"


def _add_machine_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--cipher", choices=[kind.value for kind in CipherKind], default=None)
    parser.add_argument("--key", help="128-bit key as 32 hex characters, K3 first.")
    parser.add_argument("--clock-hz", type=int, default=None)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="mipscrypt", description=__doc__.splitlines()[0])
    parser.add_argument("--log-level", default=None, help="Override MIPSCRYPT_LOG_LEVEL.")
    parser.add_argument("--log-json", action="store_true", help="Emit JSON log lines.")
    commands = parser.add_subparsers(dest="command", required=True)

    asm = commands.add_parser("asm", help="Assemble source into a big-endian word image.")
    asm.add_argument("source", type=Path)
    asm.add_argument("-o", "--out", type=Path, required=True)
    asm.add_argument("--listing", action="store_true", help="Print an address/word listing.")
    asm.add_argument("--imem-bytes", type=int, default=None)

    disasm = commands.add_parser("disasm", help="Disassemble a word image.")
    disasm.add_argument("image", type=Path)
    disasm.add_argument("-o", "--out", type=Path, default=None)

    encrypt = commands.add_parser("encrypt-image", help="ECB-encrypt an instruction image.")
    encrypt.add_argument("image", type=Path)
    encrypt.add_argument("-o", "--out", type=Path, required=True)
    encrypt.add_argument("--decrypt", action="store_true", help="Invert a previous encryption.")
    _add_machine_flags(encrypt)

    run = commands.add_parser("run", help="Run an image on the pipelined simulator.")
    run.add_argument("image", type=Path)
    _add_machine_flags(run)
    run.add_argument("--gating", type=_on_off, default=None, metavar="on|off")
    run.add_argument("--crypto-cycles", type=int, default=None)
    run.add_argument("--imem-bytes", type=int, default=None)
    run.add_argument("--dmem-bytes", type=int, default=None)
    run.add_argument("--trace", type=Path, default=None)
    run.add_argument("--max-cycles", type=int, default=None)
    run.add_argument("--report", type=Path, default=None)
    run.add_argument("--encrypted", action="store_true", help="Image is encrypted; decrypt fetches.")
    run.add_argument("--block-cache", action="store_true", help="Charge crypto latency once per block.")
    run.add_argument("--data", type=Path, default=None, help="Raw data-memory preload.")

    report = commands.add_parser("report", help="Rebuild a run report from a JSON-lines trace.")
    report.add_argument("trace", type=Path)
    report.add_argument("--clock-hz", type=int, default=None)
    report.add_argument("--report", type=Path, default=None)
    return parser


def _config_from_args(args: argparse.Namespace) -> CliConfig:
    settings = get_settings()
    gating = getattr(args, "gating", None)
    values = {
        "command": args.command,
        "cipher": getattr(args, "cipher", None) or settings.cipher,
        "key": getattr(args, "key", None),
        "clock_hz": getattr(args, "clock_hz", None),
        "gating": settings.gating_enabled if gating is None else gating,
        "trace": getattr(args, "trace", None),
        "report": getattr(args, "report", None),
        "imem_bytes": getattr(args, "imem_bytes", None),
        "dmem_bytes": getattr(args, "dmem_bytes", None),
        "crypto_cycles": getattr(args, "crypto_cycles", None),
        "max_cycles": getattr(args, "max_cycles", None),
        "encrypted": getattr(args, "encrypted", False),
        "block_cache": getattr(args, "block_cache", False),
        "data": getattr(args, "data", None),
    }
    try:
        return CliConfig(**values)
    except ValidationError as exc:
        first = exc.errors()[0]
        field = ".".join(str(part) for part in first["loc"])
        raise UsageError(f"invalid --{field.replace('_', '-')}: {first['msg']}") from exc


def _dispatch(args: argparse.Namespace) -> int:
    config = _config_from_args(args)
    command = config.command

    if command is CliCommand.ASM:
        cmd_asm(args.source, args.out, listing=args.listing, imem_bytes=args.imem_bytes)
    elif command is CliCommand.DISASM:
        cmd_disasm(args.image, args.out)
    elif command is CliCommand.ENCRYPT_IMAGE:
        config.require_key()
        cmd_encrypt_image(args.image, args.out, config.cipher, config.key, decrypt=args.decrypt)
    elif command is CliCommand.RUN:
        return cmd_run(args.image, config).exit_code
    else:
        cmd_report(args.trace, config)
    return EXIT_OK


def main(argv: Optional[Sequence[str]] = None) -> int:
    settings = get_settings()
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        configure_logging(args.log_level or settings.log_level, args.log_json or settings.log_json)
        return _dispatch(args)
    except SimulatorError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return exc.exit_code


if __name__ == "__main__":
    sys.exit(main())
