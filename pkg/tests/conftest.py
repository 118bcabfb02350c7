"""Pytest test-path bootstrap and shared simulator fixtures."""

from __future__ import annotations

import sys
from pathlib import Path

PROJECT_ROOT = Path(__file__).resolve().parents[1]
if str(PROJECT_ROOT) not in sys.path:
    sys.path.insert(0, str(PROJECT_ROOT))

import pytest

from isa.assembler import assemble
from machine.state import MachineState
from models.schemas import PipelineConfig
from pipeline.core import PipelineSimulator
from pipeline.reference import ReferenceInterpreter

PROGRAMS_DIR = PROJECT_ROOT / "programs"
CORPUS_DIR = PROGRAMS_DIR / "corpus"
DIRECTED_DIR = PROGRAMS_DIR / "directed"

# Key register words (K0, K1, K2, K3); K1||K0 is the classic DES test key.
TEST_KEY = (0x9BBCDFF1, 0x13345779, 0x0F1571C9, 0x47D9E859)
TEST_KEY_HEX = "47d9e8590f1571c9133457799bbcdff1"

CORPUS = sorted(CORPUS_DIR.glob("*.s"))


@pytest.fixture(autouse=True)
def reset_settings(monkeypatch):
    """Keep cached settings from leaking between tests."""
    from config import get_settings

    get_settings.cache_clear()
    monkeypatch.delenv("MIPSCRYPT_CIPHER", raising=False)
    yield
    get_settings.cache_clear()


def load_source(path: Path) -> str:
    return path.read_text(encoding="utf-8")


def directed(name: str) -> str:
    return load_source(DIRECTED_DIR / f"{name}.s")


def image_of(source: str) -> bytes:
    return assemble(source).to_bytes()


def make_machine(
    image: bytes,
    cipher: str = "des",
    keys=TEST_KEY,
    dmem_init: bytes = b"",
    imem_bytes: int = 256,
    dmem_bytes: int = 256,
) -> MachineState:
    machine = MachineState(cipher=cipher, imem_bytes=imem_bytes, dmem_bytes=dmem_bytes)
    machine.reset_load(image, dmem_init=dmem_init, keys=keys)
    return machine.start()


def run_pipeline(
    source: str | None = None,
    *,
    image: bytes | None = None,
    cipher: str = "des",
    keys=TEST_KEY,
    max_cycles: int = 200_000,
    keep_cycles: bool = False,
    **config,
):
    """Assemble (unless an image is given), load, start and run; returns (simulator, trace)."""
    payload = image if image is not None else image_of(source)
    machine = make_machine(payload, cipher=cipher, keys=keys)
    simulator = PipelineSimulator(
        machine, PipelineConfig(cipher=cipher, **config), keep_cycles=keep_cycles
    )
    return simulator, simulator.run(max_cycles)


def run_reference(
    source: str | None = None,
    *,
    image: bytes | None = None,
    cipher: str = "des",
    keys=TEST_KEY,
    decrypt_ifetch: bool = False,
    max_steps: int = 100_000,
):
    payload = image if image is not None else image_of(source)
    machine = make_machine(payload, cipher=cipher, keys=keys)
    result = ReferenceInterpreter(machine, decrypt_ifetch=decrypt_ifetch).run(max_steps)
    return machine, result


@pytest.fixture(params=CORPUS, ids=lambda path: path.stem)
def corpus_source(request) -> str:
    return load_source(request.param)
