import uvicorn

from app.config import get_settings

if __name__ == "__main__":
    settings = get_settings()
    # Single server process; sweeps fan out through CIRCUITS_WORKERS.
    uvicorn.run(
        "app.main:app",
        host=settings.host,
        port=settings.port,
        workers=1,
    )
