"""FastAPI dependency injection."""

from app.config import Settings, get_settings


async def get_app_settings() -> Settings:
    """Dependency for the cached settings."""
    return get_settings()
