"""Cipher selection from key-register material and ECB helpers over byte strings."""

from __future__ import annotations

import logging
import re
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache

from ciphers.aes import aes_decrypt, aes_encrypt
from ciphers.des import TdesKey, des_decrypt, des_encrypt, tdes_decrypt, tdes_encrypt
from services.errors import KeyFormatError

logger = logging.getLogger(__name__)

KeyWords = tuple[int, int, int, int]

NOP_WORD = b"\x00\x00\x00\x00"
_HEX_KEY_RE = re.compile(r"^(0x)?[0-9a-fA-F]{32}$")


class CipherKind(str, Enum):
    DES = "des"
    TDES = "tdes"
    AES = "aes"

    @property
    def block_bytes(self) -> int:
        return 16 if self is CipherKind.AES else 8

    @property
    def block_bits(self) -> int:
        return self.block_bytes * 8


def parse_key(text: str) -> KeyWords:
    """Split 32 hex characters into key words (K0, K1, K2, K3); K3 comes first in the text."""
    cleaned = text.strip().replace("_", "")
    if not _HEX_KEY_RE.match(cleaned):
        raise KeyFormatError(f"key must be 32 hex characters, got {text!r}")
    value = int(cleaned, 16)
    return tuple((value >> (32 * slot)) & 0xFFFFFFFF for slot in range(4))  # type: ignore[return-value]


def _pair(high: int, low: int) -> int:
    return ((high & 0xFFFFFFFF) << 32) | (low & 0xFFFFFFFF)


@dataclass(frozen=True)
class BlockCipher:
    """One cipher keyed from the four key-register words."""

    kind: CipherKind
    key_words: KeyWords

    @property
    def block_bytes(self) -> int:
        return self.kind.block_bytes

    @property
    def des_key(self) -> int:
        return _pair(self.key_words[1], self.key_words[0])

    @property
    def tdes_key(self) -> TdesKey:
        # Two-key EDE: k1 = k3 = K1||K0, k2 = K3||K2.
        outer = self.des_key
        return TdesKey(outer, _pair(self.key_words[3], self.key_words[2]), outer)

    @property
    def aes_key(self) -> bytes:
        return b"".join(self.key_words[slot].to_bytes(4, "big") for slot in (3, 2, 1, 0))

    def encrypt_block(self, block: bytes) -> bytes:
        self._check(block)
        if self.kind is CipherKind.AES:
            return aes_encrypt(block, self.aes_key)
        value = int.from_bytes(block, "big")
        if self.kind is CipherKind.TDES:
            return tdes_encrypt(value, self.tdes_key).to_bytes(8, "big")
        return des_encrypt(value, self.des_key).to_bytes(8, "big")

    def decrypt_block(self, block: bytes) -> bytes:
        self._check(block)
        if self.kind is CipherKind.AES:
            return aes_decrypt(block, self.aes_key)
        value = int.from_bytes(block, "big")
        if self.kind is CipherKind.TDES:
            return tdes_decrypt(value, self.tdes_key).to_bytes(8, "big")
        return des_decrypt(value, self.des_key).to_bytes(8, "big")

    def encrypt(self, data: bytes) -> bytes:
        """ECB over whole blocks."""
        return b"".join(self.encrypt_block(block) for block in self._blocks(data))

    def decrypt(self, data: bytes) -> bytes:
        return b"".join(self.decrypt_block(block) for block in self._blocks(data))

    def _check(self, block: bytes) -> None:
        if len(block) != self.block_bytes:
            raise ValueError(
                f"{self.kind.value} block must be {self.block_bytes} bytes, got {len(block)}"
            )

    def _blocks(self, data: bytes) -> list[bytes]:
        if len(data) % self.block_bytes:
            raise ValueError(
                f"data length {len(data)} is not a multiple of {self.block_bytes}"
            )
        size = self.block_bytes
        return [bytes(data[offset : offset + size]) for offset in range(0, len(data), size)]


@lru_cache(maxsize=64)
def cipher_for(kind: CipherKind | str, key_words: KeyWords) -> BlockCipher:
    return BlockCipher(CipherKind(kind), tuple(word & 0xFFFFFFFF for word in key_words))  # type: ignore[arg-type]


def pad_image(image: bytes, block_bytes: int) -> bytes:
    """Pad with NOP words up to a whole number of cipher blocks."""
    if len(image) % 4:
        raise ValueError(f"image length {len(image)} is not a multiple of 4 bytes")
    remainder = len(image) % block_bytes
    if not remainder:
        return bytes(image)
    return bytes(image) + NOP_WORD * ((block_bytes - remainder) // 4)


def encrypt_image(image: bytes, kind: CipherKind | str, key_words: KeyWords) -> bytes:
    cipher = cipher_for(kind, key_words)
    padded = pad_image(image, cipher.block_bytes)
    logger.debug(
        "Encrypting image cipher=%s bytes=%s padded=%s",
        cipher.kind.value,
        len(image),
        len(padded),
    )
    return cipher.encrypt(padded)


def decrypt_image(image: bytes, kind: CipherKind | str, key_words: KeyWords) -> bytes:
    return cipher_for(kind, key_words).decrypt(image)
