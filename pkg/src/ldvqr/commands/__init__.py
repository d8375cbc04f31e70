"""Command implementations for the ldvqr CLI."""

from ldvqr.commands.fit import fit
from ldvqr.commands.simulate import simulate

__all__ = ["fit", "simulate"]
