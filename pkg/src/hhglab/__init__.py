"""Desk-scale laboratory for hierarchically hyperbolic group structures."""

__version__ = "0.1.0"
