"""Tests for runtime settings read from the environment."""

from pathlib import Path

import pytest

from ldvqr.core.exceptions import InvalidSpecError
from ldvqr.core.settings import LOG_DIR_ENV, THREADS_ENV, get_settings, load_settings


@pytest.mark.unit
class TestLoadSettings:
    """LDVQR_THREADS and LDVQR_LOG_DIR handling."""

    def test_defaults(self) -> None:
        """Unset variables give automatic workers and a log dir under the cwd."""
        settings = load_settings({})

        assert settings.threads == 0
        assert settings.workers >= 1
        assert settings.log_dir == Path.cwd() / ".ldvqr" / "logs"

    def test_explicit_values(self, tmp_path: Path) -> None:
        """A positive thread count caps the workers."""
        settings = load_settings({THREADS_ENV: "3", LOG_DIR_ENV: str(tmp_path)})

        assert settings.workers == 3
        assert settings.log_dir == tmp_path

    def test_zero_and_blank_mean_auto(self) -> None:
        """0 and an empty value both select one worker per CPU."""
        assert load_settings({THREADS_ENV: "0"}).threads == 0
        assert load_settings({THREADS_ENV: "  "}).threads == 0

    @pytest.mark.parametrize("raw", ["-1", "2.5", "many"])
    def test_invalid_threads(self, raw: str) -> None:
        """Negative or non-integer thread counts are rejected."""
        with pytest.raises(InvalidSpecError, match="Invalid environment setting") as exc_info:
            load_settings({THREADS_ENV: raw})

        assert exc_info.value.exit_code == 2
        assert THREADS_ENV in str(exc_info.value)

    def test_cached_settings_read_the_environment(self, monkeypatch: pytest.MonkeyPatch) -> None:
        """get_settings picks up LDVQR_THREADS once its cache is cleared."""
        monkeypatch.setenv(THREADS_ENV, "2")
        get_settings.cache_clear()
        try:
            assert get_settings().workers == 2
        finally:
            get_settings.cache_clear()
