"""Transformer detector behind the external scorer wire protocol."""

__version__ = "0.1.0"
