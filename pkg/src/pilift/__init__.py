"""Exact character-theoretic tools for counting lifts of pi-partial characters."""

__version__ = "0.1.0"
