"""Logging utilities for ldvqr.

Every call takes a message plus keyword fields; the fields are written to the
log file as ``key=value`` pairs after the message so that runs (bandwidths,
seeds, failed replicates) can be grepped afterwards.
"""

import logging
from datetime import datetime
from pathlib import Path
from typing import Any

LOGGER_NAME = "ldvqr"
LOG_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"


class FieldFormatter(logging.Formatter):
    """Appends the structured fields of a record to the formatted message."""

    def format(self, record: logging.LogRecord) -> str:
        text = super().format(record)
        fields: dict[str, Any] = getattr(record, "fields", None) or {}
        if not fields:
            return text
        pairs = " ".join(f"{key}={value!r}" for key, value in fields.items())
        head, sep, tail = text.partition("\n")
        return f"{head} | {pairs}{sep}{tail}"


class LdvqrLogger:
    """Process-wide logger writing to a timestamped file under the log directory."""

    def __init__(self, log_dir: Path | None = None) -> None:
        if log_dir is None:
            from ldvqr.core.settings import load_settings

            log_dir = load_settings().log_dir

        self.log_dir = log_dir
        self.log_dir.mkdir(parents=True, exist_ok=True)

        self.logger = logging.getLogger(LOGGER_NAME)
        self.logger.setLevel(logging.DEBUG)

        if not self.logger.handlers:
            log_file = self.log_dir / f"ldvqr_{datetime.now():%Y%m%d_%H%M%S}.log"
            file_handler = logging.FileHandler(log_file, encoding="utf-8")
            file_handler.setLevel(logging.DEBUG)
            file_handler.setFormatter(FieldFormatter(LOG_FORMAT))
            self.logger.addHandler(file_handler)

            # Users get rich-formatted messages from the commands, not logger output
            console_handler = logging.StreamHandler()
            console_handler.setLevel(logging.CRITICAL)
            console_handler.setFormatter(FieldFormatter(LOG_FORMAT))
            self.logger.addHandler(console_handler)

    def _log(self, level: int, message: str, fields: dict[str, Any]) -> None:
        exc_info = fields.pop("exc_info", None)
        self.logger.log(level, message, exc_info=exc_info, extra={"fields": fields})

    def debug(self, message: str, **fields: Any) -> None:
        self._log(logging.DEBUG, message, fields)

    def info(self, message: str, **fields: Any) -> None:
        self._log(logging.INFO, message, fields)

    def warning(self, message: str, **fields: Any) -> None:
        self._log(logging.WARNING, message, fields)

    def error(self, message: str, **fields: Any) -> None:
        self._log(logging.ERROR, message, fields)

    def save_artifact(self, name: str, text: str) -> Path:
        """Write a side file (replicate dumps, Monte Carlo tables) next to the log."""
        output_file = self.log_dir / f"{name}_{datetime.now():%Y%m%d_%H%M%S_%f}.txt"
        output_file.write_text(text, encoding="utf-8")
        self.info("Artifact saved", path=str(output_file))
        return output_file


_logger: LdvqrLogger | None = None


def get_logger() -> LdvqrLogger:
    """Get or create the global logger instance."""
    global _logger
    if _logger is None:
        _logger = LdvqrLogger()
    return _logger
