"""Transitive information-flow analysis for app ecosystems."""

__version__ = "1.0.0"
