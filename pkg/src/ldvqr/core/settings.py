"""Runtime settings read from the environment."""

import os
from functools import lru_cache
from pathlib import Path

from pydantic import BaseModel, Field, ValidationError

from ldvqr.core.exceptions import InvalidSpecError

THREADS_ENV = "LDVQR_THREADS"
LOG_DIR_ENV = "LDVQR_LOG_DIR"


class Settings(BaseModel):
    """Process-wide knobs; everything else is passed explicitly."""

    threads: int = Field(0, ge=0, description="Worker cap for replicate loops (0 = auto)")
    log_dir: Path = Field(
        default_factory=lambda: Path.cwd() / ".ldvqr" / "logs",
        description="Directory for log files and saved artifacts",
    )

    @property
    def workers(self) -> int:
        """Resolved worker count."""
        if self.threads > 0:
            return self.threads
        return os.cpu_count() or 1


def load_settings(environ: dict[str, str] | None = None) -> Settings:
    """
    Build settings from environment variables.

    Raises:
        InvalidSpecError: If a variable holds an invalid value
    """
    env = os.environ if environ is None else environ
    values: dict[str, object] = {}
    if raw := env.get(THREADS_ENV, "").strip():
        values["threads"] = raw
    if raw := env.get(LOG_DIR_ENV, "").strip():
        values["log_dir"] = raw
    try:
        return Settings.model_validate(values)
    except ValidationError as e:
        raise InvalidSpecError(
            f"Invalid environment setting: {e.errors()[0]['msg']}",
            hint=f"{THREADS_ENV} must be a non-negative integer (0 = auto)",
        ) from e


@lru_cache(maxsize=1)
def get_settings() -> Settings:
    """Get the cached settings for this process."""
    return load_settings()
