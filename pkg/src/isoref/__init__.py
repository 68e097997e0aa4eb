"""Deciding type isomorphism for a call-by-value language with sums and higher-order references."""

__version__ = "0.1.0"
