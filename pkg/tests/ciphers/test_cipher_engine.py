"""Unit tests for ciphers/engine.py: key text, key-register mapping and ECB images."""

from __future__ import annotations

import pytest
from Crypto.Cipher import AES, DES

from ciphers.engine import (
    NOP_WORD,
    BlockCipher,
    CipherKind,
    cipher_for,
    decrypt_image,
    encrypt_image,
    pad_image,
    parse_key,
)
from conftest import TEST_KEY, TEST_KEY_HEX
from services.errors import KeyFormatError


# ---------------------------------------------------------------------------
# key text
# ---------------------------------------------------------------------------

def test_parse_key_orders_words_k0_first():
    assert parse_key(TEST_KEY_HEX) == TEST_KEY


def test_parse_key_accepts_prefix_and_underscores():
    text = "0x47d9e859_0f1571c9_13345779_9bbcdff1"
    assert parse_key(text) == TEST_KEY


@pytest.mark.parametrize("text", ["", "1234", "g" * 32, "0" * 33])
def test_parse_key_rejects_malformed_text(text):
    with pytest.raises(KeyFormatError, match="32 hex characters"):
        parse_key(text)


def test_key_format_error_is_a_usage_error():
    with pytest.raises(KeyFormatError) as info:
        parse_key("nope")
    assert info.value.exit_code == 1


# ---------------------------------------------------------------------------
# cipher kinds and key mapping
# ---------------------------------------------------------------------------

def test_block_sizes():
    assert CipherKind.DES.block_bytes == 8
    assert CipherKind.TDES.block_bits == 64
    assert CipherKind.AES.block_bytes == 16


def test_des_key_is_k1_k0():
    assert cipher_for(CipherKind.DES, TEST_KEY).des_key == 0x133457799BBCDFF1


def test_tdes_key_is_two_key_ede():
    key = cipher_for(CipherKind.TDES, TEST_KEY).tdes_key
    assert key.k1 == key.k3 == 0x133457799BBCDFF1
    assert key.k2 == 0x47D9E8590F1571C9


def test_aes_key_is_k3_first():
    assert cipher_for("aes", TEST_KEY).aes_key == bytes.fromhex(TEST_KEY_HEX)


def test_des_block_matches_pycryptodome():
    cipher = cipher_for(CipherKind.DES, TEST_KEY)
    block = bytes.fromhex("0123456789abcdef")
    expected = DES.new(bytes.fromhex("133457799bbcdff1"), DES.MODE_ECB).encrypt(block)
    assert cipher.encrypt_block(block) == expected
    assert cipher.decrypt_block(expected) == block


def test_aes_ecb_matches_pycryptodome():
    cipher = cipher_for(CipherKind.AES, TEST_KEY)
    data = bytes(range(48))
    expected = AES.new(bytes.fromhex(TEST_KEY_HEX), AES.MODE_ECB).encrypt(data)
    assert cipher.encrypt(data) == expected
    assert cipher.decrypt(expected) == data


def test_tdes_with_repeated_halves_equals_des():
    words = (0x9BBCDFF1, 0x13345779, 0x9BBCDFF1, 0x13345779)
    block = bytes.fromhex("0123456789abcdef")
    tdes = BlockCipher(CipherKind.TDES, words)
    des = BlockCipher(CipherKind.DES, words)
    assert tdes.encrypt_block(block) == des.encrypt_block(block)


def test_block_cipher_rejects_wrong_length():
    with pytest.raises(ValueError, match="des block must be 8 bytes"):
        cipher_for(CipherKind.DES, TEST_KEY).encrypt_block(bytes(16))


def test_ecb_rejects_partial_block():
    with pytest.raises(ValueError, match="not a multiple of 16"):
        cipher_for(CipherKind.AES, TEST_KEY).encrypt(bytes(20))


def test_cipher_for_caches_per_key():
    first = cipher_for(CipherKind.DES, TEST_KEY)
    assert cipher_for(CipherKind.DES, TEST_KEY) is first


# ---------------------------------------------------------------------------
# images
# ---------------------------------------------------------------------------

def test_pad_image_appends_nop_words():
    image = bytes.fromhex("20010001") * 3
    padded = pad_image(image, 16)
    assert len(padded) == 16
    assert padded[12:] == NOP_WORD


def test_pad_image_keeps_aligned_image():
    image = bytes(8)
    assert pad_image(image, 8) == image


def test_pad_image_rejects_ragged_image():
    with pytest.raises(ValueError, match="multiple of 4"):
        pad_image(bytes(3), 8)


@pytest.mark.parametrize("kind", list(CipherKind))
def test_encrypted_image_decrypts_to_padded_plaintext(kind):
    image = bytes.fromhex("20010001" "00221820" "08000002")
    encrypted = encrypt_image(image, kind, TEST_KEY)
    assert len(encrypted) % kind.block_bytes == 0
    assert encrypted[: len(image)] != image
    assert decrypt_image(encrypted, kind, TEST_KEY) == pad_image(image, kind.block_bytes)


def test_two_word_des_image_is_one_block():
    image = bytes.fromhex("20010001" "08000001")
    encrypted = encrypt_image(image, CipherKind.DES, TEST_KEY)
    expected = DES.new(bytes.fromhex("133457799bbcdff1"), DES.MODE_ECB).encrypt(image)
    assert encrypted == expected


def test_three_word_des_image_pads_to_two_blocks():
    image = bytes.fromhex("20010001" "20020002" "08000002")
    encrypted = encrypt_image(image, CipherKind.DES, TEST_KEY)
    assert len(encrypted) == 16
    assert decrypt_image(encrypted, CipherKind.DES, TEST_KEY)[12:] == NOP_WORD
