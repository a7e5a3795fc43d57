from app.core.config import Settings, settings


def get_settings() -> Settings:
    """
    Settings instance for dependency injection.

    Tests override this to pin array defaults or the seed.
    """
    return settings
