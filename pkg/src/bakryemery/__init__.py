"""Numerical verification of comparison geometry for the Bakry-Emery Ricci tensor
on rotationally symmetric smooth metric measure spaces."""

__version__ = "0.1.0"
