"""Finite topological groupoids, convolution algebras, and Cartan diagnostics."""

__version__ = "0.1.0"
