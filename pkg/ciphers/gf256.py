"""GF(2^8) arithmetic modulo m(x) = x^8 + x^4 + x^3 + x + 1 and S-box generation."""

from __future__ import annotations

import numpy as np

REDUCTION = 0x1B
AFFINE_CONSTANT = 0x63


def gf_mul(a: int, b: int) -> int:
    """Carry-less product of two bytes reduced by m(x)."""
    product = 0
    a &= 0xFF
    b &= 0xFF
    while b:
        if b & 1:
            product ^= a
        carry = a & 0x80
        a = (a << 1) & 0xFF
        if carry:
            a ^= REDUCTION
        b >>= 1
    return product


def gf_inverse(a: int) -> int:
    """Multiplicative inverse as a^254; the inverse of 0 is taken as 0."""
    result, base, exponent = 1, a & 0xFF, 254
    while exponent:
        if exponent & 1:
            result = gf_mul(result, base)
        base = gf_mul(base, base)
        exponent >>= 1
    return result if a else 0


def _affine_matrix() -> np.ndarray:
    # Output bit i = b_i ^ b_(i+4) ^ b_(i+5) ^ b_(i+6) ^ b_(i+7), indices mod 8, bit 0 = LSB.
    matrix = np.zeros((8, 8), dtype=np.uint8)
    for row in range(8):
        for offset in (0, 4, 5, 6, 7):
            matrix[row, (row + offset) % 8] = 1
    return matrix


def build_sbox() -> tuple[np.ndarray, np.ndarray]:
    """Forward and inverse substitution tables from the inverse + affine definition."""
    inverses = np.array([gf_inverse(value) for value in range(256)], dtype=np.uint8)
    bits = np.unpackbits(inverses[:, None], axis=1, bitorder="little")
    constant = np.unpackbits(np.array([AFFINE_CONSTANT], dtype=np.uint8), bitorder="little")
    transformed = (bits.astype(np.int64) @ _affine_matrix().T.astype(np.int64)) % 2
    transformed = transformed.astype(np.uint8) ^ constant
    sbox = np.packbits(transformed, axis=1, bitorder="little").reshape(256)

    inverse = np.zeros(256, dtype=np.uint8)
    inverse[sbox] = np.arange(256, dtype=np.uint8)
    return sbox, inverse


def multiplication_table(factor: int) -> np.ndarray:
    return np.array([gf_mul(value, factor) for value in range(256)], dtype=np.uint8)
