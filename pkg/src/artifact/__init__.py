"""Exact homological algebra over the zigzag algebras A_m^n."""

__version__ = "0.1.0"
