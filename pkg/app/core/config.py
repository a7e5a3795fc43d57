from pydantic import field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """Application settings loaded from environment variables."""

    # Application Settings
    ENVIRONMENT: str = "development"
    LOG_LEVEL: str = "INFO"

    # HTTP API
    CORS_ORIGINS: str = (
        "http://localhost,http://localhost:3000,http://localhost:8080,"
        "http://127.0.0.1:3000,http://127.0.0.1:8080"
    )

    # Array defaults (MorphoSys M1: 8x8 cells, four 4x4 quadrants, 100 MHz)
    DEFAULT_ARRAY_ROWS: int = 8
    DEFAULT_ARRAY_COLS: int = 8
    DEFAULT_QUADRANT_SIZE: int = 4
    DEFAULT_CLOCK_MHZ: float = 100.0

    # Random inputs and weights
    DEFAULT_SEED: int = 1999
    RANDOM_VALUE_LIMIT: int = 100

    # Performance sweeps
    DEFAULT_ORDERS: str = "8,16,32,64"
    SWEEP_MAX_WORKERS: int = 4
    MEASURE_BURSTS: int = 3

    @field_validator("LOG_LEVEL", mode="before")
    @classmethod
    def normalize_log_level(cls, v: str | None) -> str:
        """Upper-case the log level; empty values from .env fall back to INFO."""
        if v is None or v == "":
            return "INFO"
        return str(v).strip().upper()

    model_config = SettingsConfigDict(
        env_file=".env",
        env_file_encoding="utf-8",
        case_sensitive=True,
        extra="ignore",
    )

    def get_orders(self) -> list[int]:
        """
        Parse the comma-separated filter order list.

        Raises:
            ValueError: If an entry is not a positive integer.
        """
        orders = [int(item) for item in self.DEFAULT_ORDERS.split(",") if item.strip()]
        if not orders or any(order < 1 for order in orders):
            raise ValueError(f"DEFAULT_ORDERS must list positive integers, got '{self.DEFAULT_ORDERS}'")
        return orders


settings = Settings()
