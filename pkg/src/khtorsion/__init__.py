"""Khovanov homology of braid closures."""
__version__ = "0.1.0"
