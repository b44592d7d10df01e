"""Exact slope arithmetic and desk-scale checks for vector bundles on curves."""

__version__ = "0.1.0"
