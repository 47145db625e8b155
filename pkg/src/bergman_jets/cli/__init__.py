"""Command-line interface."""

from .main import main, build_parser, RunConfig

__all__ = ["main", "build_parser", "RunConfig"]
