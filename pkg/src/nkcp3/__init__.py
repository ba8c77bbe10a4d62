"""Totally real surfaces in the nearly Kähler CP^3: structure, orbits, catalog, classifier."""

__version__ = "0.1.0"
