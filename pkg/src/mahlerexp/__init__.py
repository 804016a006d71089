"""Hankel determinants, Hankel continued fractions and irrationality
exponents of Mahler-type power series."""

__version__ = "0.1.0"
