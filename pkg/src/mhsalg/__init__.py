"""Exact algebra for multiple harmonic sums over roots of unity, word Hopf
algebras, substitution actions and finite multiple zeta values."""

__version__ = "0.1.0"
