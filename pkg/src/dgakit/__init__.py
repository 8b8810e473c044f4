"""Exact computations with finitely presented differential graded algebras."""

__version__ = "0.1.0"
