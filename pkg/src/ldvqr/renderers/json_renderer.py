"""JSON output renderer."""

import json
from pathlib import Path
from typing import Any

from pydantic import BaseModel

from ldvqr.renderers.base import BaseRenderer


class JSONRenderer(BaseRenderer):
    """
    Renders output as formatted JSON.

    Infinite censoring limits and undefined statistics are written as the
    Infinity and NaN tokens that Python's json module reads back.
    """

    def __init__(self, verbose: bool = False, indent: int = 2) -> None:
        super().__init__(verbose)
        self.indent = indent

    def render(self, data: BaseModel | dict[str, Any]) -> str:
        """Render data as a JSON string."""
        return json.dumps(self._to_dict(data), indent=self.indent, ensure_ascii=False, default=str)

    def render_to_file(self, data: BaseModel | dict[str, Any], output_path: Path) -> None:
        """Render data and write it to a JSON file."""
        output_path.parent.mkdir(parents=True, exist_ok=True)
        output_path.write_text(self.render(data) + "\n", encoding="utf-8")
