"""Exact engine for relative homological categories on finite pointed categories."""

__version__ = "0.1.0"
