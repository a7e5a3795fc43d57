import os

import pytest

from app.core.config import Settings


def create_test_settings(**env_vars) -> Settings:
    """
    Create a Settings instance with specific environment variables.

    This helper temporarily sets environment variables, creates a Settings
    instance that ignores the .env file, and then restores the original env.
    """
    managed_keys = [
        "ENVIRONMENT",
        "LOG_LEVEL",
        "DEFAULT_ARRAY_ROWS",
        "DEFAULT_ARRAY_COLS",
        "DEFAULT_QUADRANT_SIZE",
        "DEFAULT_CLOCK_MHZ",
        "DEFAULT_SEED",
        "RANDOM_VALUE_LIMIT",
        "DEFAULT_ORDERS",
        "SWEEP_MAX_WORKERS",
        "MEASURE_BURSTS",
    ]

    # Save and clear current environment
    saved_env = {}
    for key in managed_keys:
        saved_env[key] = os.environ.pop(key, None)

    for key, value in env_vars.items():
        os.environ[key] = str(value)

    try:
        return Settings(_env_file=None)
    finally:
        for key in managed_keys:
            os.environ.pop(key, None)
        for key, value in saved_env.items():
            if value is not None:
                os.environ[key] = value


class TestSettings:
    """Tests for Settings configuration."""

    def test_default_environment(self):
        """Test default environment is development."""
        settings = create_test_settings()
        assert settings.ENVIRONMENT == "development"

    def test_default_log_level(self):
        """Test default log level is INFO."""
        settings = create_test_settings()
        assert settings.LOG_LEVEL == "INFO"

    def test_default_array_is_m1(self):
        """Test the default array is 8x8 with 4x4 quadrants at 100 MHz."""
        settings = create_test_settings()
        assert settings.DEFAULT_ARRAY_ROWS == 8
        assert settings.DEFAULT_ARRAY_COLS == 8
        assert settings.DEFAULT_QUADRANT_SIZE == 4
        assert settings.DEFAULT_CLOCK_MHZ == 100.0

    def test_array_from_env_vars(self):
        """Test array shape and clock are read from env vars."""
        settings = create_test_settings(DEFAULT_ARRAY_ROWS="12", DEFAULT_ARRAY_COLS="12", DEFAULT_CLOCK_MHZ="85")
        assert settings.DEFAULT_ARRAY_ROWS == 12
        assert settings.DEFAULT_ARRAY_COLS == 12
        assert settings.DEFAULT_CLOCK_MHZ == 85.0

    def test_log_level_from_env_var(self):
        """Test log level is set from env var."""
        settings = create_test_settings(LOG_LEVEL="DEBUG")
        assert settings.LOG_LEVEL == "DEBUG"

    def test_log_level_is_upper_cased(self):
        """Test that a lower-case log level is normalized."""
        settings = create_test_settings(LOG_LEVEL=" warning ")
        assert settings.LOG_LEVEL == "WARNING"

    def test_empty_log_level_falls_back_to_info(self):
        """Test that an empty log level falls back to INFO."""
        settings = create_test_settings(LOG_LEVEL="")
        assert settings.LOG_LEVEL == "INFO"


class TestOrderParsing:
    """Tests for the filter order list."""

    def test_default_orders(self):
        """Test the default orders are the table orders."""
        settings = create_test_settings()
        assert settings.get_orders() == [8, 16, 32, 64]

    def test_orders_from_env_var(self):
        """Test that orders are parsed from env var, blanks ignored."""
        settings = create_test_settings(DEFAULT_ORDERS="2, 3,,4")
        assert settings.get_orders() == [2, 3, 4]

    def test_non_positive_order_raises(self):
        """Test that ValueError is raised for a zero order."""
        settings = create_test_settings(DEFAULT_ORDERS="8,0")

        with pytest.raises(ValueError) as exc_info:
            settings.get_orders()

        assert "positive" in str(exc_info.value)

    def test_non_integer_order_raises(self):
        """Test that ValueError is raised for a non-integer order."""
        settings = create_test_settings(DEFAULT_ORDERS="8,sixteen")

        with pytest.raises(ValueError):
            settings.get_orders()


class TestSweepSettings:
    """Tests for seed and sweep parameters."""

    def test_default_seed_and_limit(self):
        """Test default seed and random value bound."""
        settings = create_test_settings()
        assert settings.DEFAULT_SEED == 1999
        assert settings.RANDOM_VALUE_LIMIT == 100

    def test_sweep_parameters_from_env_vars(self):
        """Test worker count and burst count are parsed from env vars."""
        settings = create_test_settings(SWEEP_MAX_WORKERS="2", MEASURE_BURSTS="5")
        assert settings.SWEEP_MAX_WORKERS == 2
        assert settings.MEASURE_BURSTS == 5
