"""Finite-group Schur multipliers, exterior squares and multiplicative Lie brackets."""

__version__ = "0.1.0"
