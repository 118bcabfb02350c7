"""Block ciphers used by the memory and fetch paths."""

from ciphers.engine import (
    BlockCipher,
    CipherKind,
    cipher_for,
    decrypt_image,
    encrypt_image,
    pad_image,
    parse_key,
)

__all__ = [
    "BlockCipher",
    "CipherKind",
    "cipher_for",
    "decrypt_image",
    "encrypt_image",
    "pad_image",
    "parse_key",
]
