"""Base class for renderers that serialize results to text and files."""

from abc import ABC, abstractmethod
from pathlib import Path
from typing import Any

from pydantic import BaseModel


class BaseRenderer(ABC):
    """Abstract base for serializing renderers; terminal output is built from components."""

    def __init__(self, verbose: bool = False) -> None:
        """
        Initialize renderer.

        Args:
            verbose: Enable verbose output
        """
        self.verbose = verbose

    @abstractmethod
    def render(self, data: BaseModel | dict[str, Any]) -> str:
        """Render data to the output format."""

    @abstractmethod
    def render_to_file(self, data: BaseModel | dict[str, Any], output_path: Path) -> None:
        """Render data and write it to a file."""

    def _to_dict(self, data: BaseModel | dict[str, Any]) -> dict[str, Any]:
        """Plain-Python view of a model; floats keep full precision and non-finite values."""
        if isinstance(data, BaseModel):
            return data.model_dump(mode="python")
        return data
