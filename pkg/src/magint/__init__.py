"""Integrable two-dimensional magnetic-field systems."""

__version__ = "0.1.0"
