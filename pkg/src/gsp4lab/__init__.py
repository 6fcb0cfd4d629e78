"""Spectral toolkit for Siegel modular forms on GSp(4)."""

__version__ = "0.1.0"
