"""Exact computation of integral Adams E2 pages through quiver representations."""

__version__ = "0.1.0"
