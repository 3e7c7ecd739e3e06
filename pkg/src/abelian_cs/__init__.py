"""Exact abelian Chern-Simons Wilson lines on triangulated 3-manifolds."""

__version__ = "0.1.0"
