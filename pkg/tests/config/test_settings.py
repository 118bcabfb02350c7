"""Unit tests for config/settings.py."""

from __future__ import annotations

from config import get_settings


def test_settings_defaults():
    settings = get_settings()
    assert settings.cipher == "des"
    assert settings.imem_bytes == 256
    assert settings.crypto_cycles_for("tdes") == 16
    assert settings.crypto_cycles_for("aes") == 43
    assert settings.clock_hz_for("tdes") == 209_000_000


def test_settings_read_prefixed_environment(monkeypatch):
    monkeypatch.setenv("MIPSCRYPT_AES_CLOCK_HZ", "100000000")
    monkeypatch.setenv("MIPSCRYPT_GATING_ENABLED", "false")
    settings = get_settings()
    assert settings.clock_hz_for("aes") == 100_000_000
    assert settings.gating_enabled is False


def test_settings_are_cached():
    assert get_settings() is get_settings()
