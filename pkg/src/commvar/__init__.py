"""Exact verification of the characteristic submodule and canonical complexes of reductive Lie algebras."""

__version__ = "0.1.0"
