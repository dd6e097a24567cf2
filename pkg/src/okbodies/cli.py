"""Console entry point; the implementation lives next to the census."""

from .census import build_parser, main

__all__ = ["build_parser", "main"]
