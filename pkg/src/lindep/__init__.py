"""Checker and empirical analyzer for a core language with linear dependent types."""

__version__ = "0.1.0"
