"""Modular symbols for Gamma_0(N) with character over exact fields."""

__version__ = "0.1.0"
