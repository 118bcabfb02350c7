"""Architectural state, the reset/load/run protocol and encrypted memory access.

Memory encryption works on aligned cipher blocks in ECB mode. A word store
under crypt mode reads the containing block, decrypts it, patches the word,
re-encrypts and writes the block back.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from enum import Enum

from ciphers.engine import BlockCipher, CipherKind, KeyWords, cipher_for
from machine.memory import WORD_BYTES, Memory
from services.errors import MemoryFaultError, ProtocolError, SimulationFault

logger = logging.getLogger(__name__)

REGISTER_COUNT = 32
KEY_SLOTS = 4


class MachineMode(str, Enum):
    RESET = "reset"
    RUNNING = "running"


@dataclass
class RegisterFile:
    regs: list[int] = field(default_factory=lambda: [0] * REGISTER_COUNT)

    def read(self, index: int) -> int:
        return 0 if index == 0 else self.regs[index]

    def write(self, index: int, value: int) -> None:
        if index != 0:
            self.regs[index] = value & 0xFFFFFFFF

    def clear(self) -> None:
        self.regs = [0] * REGISTER_COUNT

    def snapshot(self) -> tuple[int, ...]:
        return tuple(self.regs)


@dataclass
class KeyRegister:
    """Key words K0..K3; K3 is the most significant."""

    words: list[int] = field(default_factory=lambda: [0] * KEY_SLOTS)

    def write(self, slot: int, value: int) -> None:
        if not 0 <= slot < KEY_SLOTS:
            raise SimulationFault(f"key slot {slot} out of range 0..{KEY_SLOTS - 1}")
        self.words[slot] = value & 0xFFFFFFFF

    def snapshot(self) -> KeyWords:
        return tuple(self.words)  # type: ignore[return-value]


class MachineState:
    """Registers, key register, both memories, pc and crypt mode."""

    def __init__(
        self,
        cipher: CipherKind | str = CipherKind.DES,
        imem_bytes: int = 256,
        dmem_bytes: int = 256,
    ):
        self.cipher_kind = CipherKind(cipher)
        self.imem = Memory(imem_bytes, name="imem")
        self.dmem = Memory(dmem_bytes, name="dmem")
        self.rf = RegisterFile()
        self.keys = KeyRegister()
        self.pc = 0
        self.crypt_enabled = False
        self.mode = MachineMode.RESET
        self.image_base = 0
        self.image_end = 0
        self.fetch_key: KeyWords = self.keys.snapshot()
        self._fetch_blocks: dict[int, bytes] = {}

    # ------------------------------------------------------------------
    # Reset / run protocol
    # ------------------------------------------------------------------

    def reset_load(
        self,
        image: bytes,
        dmem_init: bytes = b"",
        at: int = 0,
        keys: KeyWords | None = None,
    ) -> "MachineState":
        if self.mode is not MachineMode.RESET:
            raise ProtocolError("memories can only be loaded in reset mode")
        if at % WORD_BYTES:
            raise MemoryFaultError(f"image base 0x{at:x} is not word aligned", address=at)
        if len(image) % WORD_BYTES:
            raise MemoryFaultError(f"image length {len(image)} is not a multiple of 4 bytes")
        if at < 0 or at + len(image) > self.imem.capacity:
            raise MemoryFaultError(
                f"image of {len(image) // WORD_BYTES} words at 0x{at:x} exceeds "
                f"{self.imem.capacity}-byte instruction memory",
                address=at,
            )
        if len(dmem_init) > self.dmem.capacity:
            raise MemoryFaultError(
                f"data preload of {len(dmem_init)} bytes exceeds "
                f"{self.dmem.capacity}-byte data memory"
            )

        self.imem.clear()
        self.dmem.clear()
        self.imem.write(at, image)
        if dmem_init:
            self.dmem.write(0, dmem_init)

        self.rf.clear()
        self.keys = KeyRegister(list(keys) if keys is not None else [0] * KEY_SLOTS)
        self.pc = at
        self.crypt_enabled = False
        self.image_base = at
        self.image_end = at + len(image)
        self._fetch_blocks = {}
        logger.debug(
            "Loaded image words=%s base=0x%x data_bytes=%s",
            len(image) // WORD_BYTES,
            at,
            len(dmem_init),
        )
        return self

    def start(self) -> "MachineState":
        if self.mode is MachineMode.RUNNING:
            raise ProtocolError("machine is already running")
        self.mode = MachineMode.RUNNING
        self.imem.read_only = True
        self.fetch_key = self.keys.snapshot()
        self._fetch_blocks = {}
        logger.info("Machine started pc=0x%x cipher=%s", self.pc, self.cipher_kind.value)
        return self

    def reset(self) -> "MachineState":
        self.mode = MachineMode.RESET
        self.imem.read_only = False
        self.crypt_enabled = False
        return self

    @property
    def image_words(self) -> int:
        return (self.image_end - self.image_base) // WORD_BYTES

    def in_image(self, address: int) -> bool:
        return self.image_base <= address < self.image_end

    # ------------------------------------------------------------------
    # Key register
    # ------------------------------------------------------------------

    def load_key_word(self, slot: int, value: int) -> "MachineState":
        self.keys.write(slot, value)
        logger.debug("Key word written slot=%s", slot)
        return self

    @property
    def cipher(self) -> BlockCipher:
        """Cipher keyed from the live key register (data path)."""
        return cipher_for(self.cipher_kind, self.keys.snapshot())

    @property
    def fetch_cipher(self) -> BlockCipher:
        """Cipher keyed from the key register as latched at start (fetch path)."""
        return cipher_for(self.cipher_kind, self.fetch_key)

    # ------------------------------------------------------------------
    # Memory paths
    # ------------------------------------------------------------------

    def _block_base(self, address: int) -> int:
        size = self.cipher_kind.block_bytes
        base = address - address % size
        if base + size > self.dmem.capacity:
            raise MemoryFaultError(
                f"cipher block at 0x{base:x} extends past data memory end", address=address
            )
        return base

    def encrypted_store_word(self, address: int, value: int, crypt: bool | None = None) -> None:
        enabled = self.crypt_enabled if crypt is None else crypt
        if not enabled:
            self.dmem.write_word(address, value)
            return
        self.dmem.read_word(address)
        base = self._block_base(address)
        cipher = self.cipher
        plain = bytearray(cipher.decrypt_block(self.dmem.read(base, cipher.block_bytes)))
        offset = address - base
        plain[offset : offset + WORD_BYTES] = (value & 0xFFFFFFFF).to_bytes(WORD_BYTES, "big")
        self.dmem.write(base, cipher.encrypt_block(bytes(plain)))

    def encrypted_load_word(self, address: int, crypt: bool | None = None) -> int:
        enabled = self.crypt_enabled if crypt is None else crypt
        if not enabled:
            return self.dmem.read_word(address)
        self.dmem.read_word(address)
        base = self._block_base(address)
        cipher = self.cipher
        plain = cipher.decrypt_block(self.dmem.read(base, cipher.block_bytes))
        offset = address - base
        return int.from_bytes(plain[offset : offset + WORD_BYTES], "big")

    def load_plain_word(self, address: int) -> int:
        """Key loads bypass the decryption core."""
        return self.dmem.read_word(address)

    def fetch_word(self, address: int, decrypt: bool = False) -> int:
        """Instruction fetch; `decrypt` routes the containing block through the fetch cipher."""
        if not decrypt:
            return self.imem.read_word(address)
        self.imem.read_word(address)
        size = self.cipher_kind.block_bytes
        base = address - address % size
        plain = self._fetch_blocks.get(base)
        if plain is None:
            if base + size > self.imem.capacity:
                raise MemoryFaultError(
                    f"cipher block at 0x{base:x} extends past instruction memory end",
                    address=address,
                )
            plain = self.fetch_cipher.decrypt_block(self.imem.read(base, size))
            self._fetch_blocks[base] = plain
        offset = address - base
        return int.from_bytes(plain[offset : offset + WORD_BYTES], "big")

    def fetch_block_address(self, address: int) -> int:
        return address - address % self.cipher_kind.block_bytes
