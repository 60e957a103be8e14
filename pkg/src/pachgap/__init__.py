"""Exact workbench for homogeneous selection under maps built from subspace lattices."""

__version__ = "0.1.0"
