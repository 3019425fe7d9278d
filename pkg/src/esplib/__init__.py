"""Exact computations with elementary and elementary symplectic groups over commutative rings."""

__version__ = "0.1.0"
