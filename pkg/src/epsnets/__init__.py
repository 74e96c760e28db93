"""Generalized numbers and functions as nets for small eps."""

__version__ = "0.1.0"
