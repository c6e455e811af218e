"""Exact computations with rings of differential operators on finite-dimensional algebras."""

__version__ = "0.1.0"
