"""Simulator settings from environment variables."""

from functools import lru_cache

from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    model_config = SettingsConfigDict(
        env_prefix="MIPSCRYPT_",
        env_file=".env",
        env_file_encoding="utf-8",
        extra="ignore",
    )

    cipher: str = "des"
    imem_bytes: int = 256
    dmem_bytes: int = 256
    max_cycles: int = 1_000_000
    gating_enabled: bool = True

    des_crypto_cycles: int = 16
    aes_crypto_cycles: int = 43

    des_clock_hz: int = 218_000_000
    tdes_clock_hz: int = 209_000_000
    aes_clock_hz: int = 210_000_000

    vdd_volts: float = 1.5
    capacitance_farads: float = 1e-9

    log_level: str = "WARNING"
    log_json: bool = False

    def clock_hz_for(self, cipher: str) -> int:
        return {
            "des": self.des_clock_hz,
            "tdes": self.tdes_clock_hz,
            "aes": self.aes_clock_hz,
        }[cipher]

    def crypto_cycles_for(self, cipher: str) -> int:
        return self.aes_crypto_cycles if cipher == "aes" else self.des_crypto_cycles


@lru_cache
def get_settings() -> Settings:
    return Settings()
