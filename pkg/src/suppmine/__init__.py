"""suppmine: mine and serve supplement-interaction evidence from abstracts."""

__version__ = "0.1.0"
