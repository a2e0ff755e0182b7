"""Exact and rigorous-numeric machinery for Mahler functional equations."""

__version__ = "0.1.0"
