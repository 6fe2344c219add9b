"""Command-line interface: ``check``, ``lift``, ``apply`` and ``scenario``."""

from .main import build_parser, main

__all__ = ["build_parser", "main"]
