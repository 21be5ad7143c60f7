"""Desk-scale coarse invariants of finitely generated groups."""

__version__ = "0.1.0"
