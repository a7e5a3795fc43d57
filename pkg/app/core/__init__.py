from app.core.config import Settings, settings
from app.core.logging import configure_logging

__all__ = ["Settings", "configure_logging", "settings"]
