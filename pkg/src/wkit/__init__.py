"""Exact toolkit for homotopy categories, weight structures and filtered complexes."""

__version__ = "0.1.0"
