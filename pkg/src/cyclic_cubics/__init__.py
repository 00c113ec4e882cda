"""Exact lattice and polynomial computations around cyclic cubic fourfolds."""

__version__ = "0.1.0"
