"""Aquifer saturated-thickness analytics engine and HTTP service."""

__version__ = "0.1.0"
