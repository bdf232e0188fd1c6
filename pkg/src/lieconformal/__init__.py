"""Exact symbolic toolkit for Lie conformal algebras."""

__version__ = "0.1.0"
