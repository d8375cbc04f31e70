"""Output rendering for the ldvqr command line."""

from ldvqr.renderers.base import BaseRenderer
from ldvqr.renderers.json_renderer import JSONRenderer
from ldvqr.renderers.terminal_renderer import TerminalRenderer

__all__ = ["BaseRenderer", "JSONRenderer", "TerminalRenderer"]
