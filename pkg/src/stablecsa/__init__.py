"""Exact constructions and stability certificates for central simple algebras with involution."""

__version__ = "0.1.0"
