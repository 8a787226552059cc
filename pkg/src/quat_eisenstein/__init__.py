"""Quaternionic Eisenstein series of degree 2: exact coefficients, U(p) and p-adic limits."""

__version__ = "0.1.0"
