"""Byte-addressable memory with big-endian, word-aligned access."""

from __future__ import annotations

import logging

from services.errors import MemoryFaultError, ProtocolError, UsageError

logger = logging.getLogger(__name__)

MIN_CAPACITY = 16
MAX_CAPACITY = 4096
WORD_BYTES = 4


def validate_capacity(capacity: int) -> int:
    if capacity < MIN_CAPACITY or capacity > MAX_CAPACITY or capacity & (capacity - 1):
        raise UsageError(
            f"memory capacity must be a power of two in [{MIN_CAPACITY}, {MAX_CAPACITY}], got {capacity}"
        )
    return capacity


class Memory:
    def __init__(self, capacity: int = 256, name: str = "mem"):
        self.capacity = validate_capacity(capacity)
        self.name = name
        self.data = bytearray(capacity)
        self.read_only = False

    def clear(self) -> None:
        self.data[:] = bytes(self.capacity)

    def _check_range(self, address: int, size: int) -> None:
        if address < 0 or address + size > self.capacity:
            raise MemoryFaultError(
                f"{self.name} access of {size} bytes at 0x{address:x} outside {self.capacity}-byte memory",
                address=address,
            )

    def _check_word(self, address: int) -> None:
        if address % WORD_BYTES:
            raise MemoryFaultError(
                f"unaligned {self.name} word access at 0x{address:x}", address=address
            )
        self._check_range(address, WORD_BYTES)

    def read(self, address: int, size: int) -> bytes:
        self._check_range(address, size)
        return bytes(self.data[address : address + size])

    def write(self, address: int, payload: bytes) -> None:
        if self.read_only:
            raise ProtocolError(f"{self.name} is read-only while running")
        self._check_range(address, len(payload))
        self.data[address : address + len(payload)] = payload

    def read_word(self, address: int) -> int:
        self._check_word(address)
        return int.from_bytes(self.data[address : address + WORD_BYTES], "big")

    def write_word(self, address: int, value: int) -> None:
        self._check_word(address)
        self.write(address, (value & 0xFFFFFFFF).to_bytes(WORD_BYTES, "big"))

    def snapshot(self) -> bytes:
        return bytes(self.data)
