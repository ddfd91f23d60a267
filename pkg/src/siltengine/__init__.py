"""Exact computation with two-term complexes over finite dimensional algebras."""

__version__ = "0.1.0"
