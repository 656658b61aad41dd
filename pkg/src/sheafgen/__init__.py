"""Generating functions for moduli of one-dimensional and rank-two sheaves on ruled surfaces."""
__version__ = "0.1.0"
