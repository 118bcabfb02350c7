"""AES-128 cipher and inverse cipher over a NumPy 4x4 byte state.

The state is filled column by column from the block: `state[r, c]` holds
block byte `r + 4*c`. Round-key words map to state columns, most
significant byte in row 0.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np

from ciphers.gf256 import build_sbox, multiplication_table

NB = 4
NK = 4
NR = 10
BLOCK_BYTES = 16

AesState = np.ndarray
RoundKeys = tuple[int, ...]

SBOX, INV_SBOX = build_sbox()
if SBOX[0x00] != 0x63 or SBOX[0x53] != 0xED:
    raise RuntimeError("generated S-box disagrees with the standard constants")

_MUL = {factor: multiplication_table(factor) for factor in (2, 3, 9, 11, 13, 14)}
_ROWS = np.arange(4)[:, None]
_SHIFT_COLS = (np.arange(4)[None, :] + _ROWS) % 4
_INV_SHIFT_COLS = (np.arange(4)[None, :] - _ROWS) % 4
RCON = (0x01, 0x02, 0x04, 0x08, 0x10, 0x20, 0x40, 0x80, 0x1B, 0x36)


def _check_length(data: bytes, what: str) -> None:
    if len(data) != BLOCK_BYTES:
        raise ValueError(f"{what} must be {BLOCK_BYTES} bytes, got {len(data)}")


def state_from_block(block: bytes) -> AesState:
    _check_length(block, "block")
    return np.frombuffer(bytes(block), dtype=np.uint8).reshape(NB, 4).T.copy()


def block_from_state(state: AesState) -> bytes:
    return state.T.tobytes()


def sub_bytes(state: AesState) -> AesState:
    return SBOX[state]


def inv_sub_bytes(state: AesState) -> AesState:
    return INV_SBOX[state]


def shift_rows(state: AesState) -> AesState:
    """Rotate row r left by r positions."""
    return state[_ROWS, _SHIFT_COLS]


def inv_shift_rows(state: AesState) -> AesState:
    return state[_ROWS, _INV_SHIFT_COLS]


def mix_columns(state: AesState) -> AesState:
    """Multiply each column by {03}x^3 + {01}x^2 + {01}x + {02} modulo x^4 + 1."""
    return (
        _MUL[2][state]
        ^ np.roll(_MUL[3][state], -1, axis=0)
        ^ np.roll(state, -2, axis=0)
        ^ np.roll(state, -3, axis=0)
    )


def inv_mix_columns(state: AesState) -> AesState:
    return (
        _MUL[14][state]
        ^ np.roll(_MUL[11][state], -1, axis=0)
        ^ np.roll(_MUL[13][state], -2, axis=0)
        ^ np.roll(_MUL[9][state], -3, axis=0)
    )


def _words_to_matrix(words: tuple[int, ...] | list[int]) -> np.ndarray:
    packed = b"".join(word.to_bytes(4, "big") for word in words)
    return np.frombuffer(packed, dtype=np.uint8).reshape(NB, 4).T


def add_round_key(state: AesState, round_key: tuple[int, ...] | list[int]) -> AesState:
    return state ^ _words_to_matrix(round_key)


def _sub_word(word: int) -> int:
    return int.from_bytes(bytes(SBOX[np.frombuffer(word.to_bytes(4, "big"), dtype=np.uint8)]), "big")


def _rot_word(word: int) -> int:
    return ((word << 8) | (word >> 24)) & 0xFFFFFFFF


@lru_cache(maxsize=256)
def key_expansion(key: bytes) -> RoundKeys:
    """Expand a 128-bit key into Nb*(Nr+1) = 44 round-key words."""
    _check_length(key, "key")
    words = [int.from_bytes(key[4 * i : 4 * i + 4], "big") for i in range(NK)]
    for i in range(NK, NB * (NR + 1)):
        temp = words[i - 1]
        if i % NK == 0:
            temp = _sub_word(_rot_word(temp)) ^ (RCON[i // NK - 1] << 24)
        words.append(words[i - NK] ^ temp)
    return tuple(words)


def _round_key(schedule: RoundKeys, round_index: int) -> tuple[int, ...]:
    return schedule[NB * round_index : NB * (round_index + 1)]


def aes_encrypt(block: bytes, key: bytes) -> bytes:
    schedule = key_expansion(bytes(key))
    state = add_round_key(state_from_block(block), _round_key(schedule, 0))
    for round_index in range(1, NR):
        state = mix_columns(shift_rows(sub_bytes(state)))
        state = add_round_key(state, _round_key(schedule, round_index))
    state = shift_rows(sub_bytes(state))
    return block_from_state(add_round_key(state, _round_key(schedule, NR)))


def aes_decrypt(block: bytes, key: bytes) -> bytes:
    schedule = key_expansion(bytes(key))
    state = add_round_key(state_from_block(block), _round_key(schedule, NR))
    for round_index in range(NR - 1, 0, -1):
        state = inv_sub_bytes(inv_shift_rows(state))
        state = inv_mix_columns(add_round_key(state, _round_key(schedule, round_index)))
    state = inv_sub_bytes(inv_shift_rows(state))
    return block_from_state(add_round_key(state, _round_key(schedule, 0)))
