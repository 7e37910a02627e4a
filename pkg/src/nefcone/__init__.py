"""Exact computations with nef, movable and effective cones of divisors."""

__version__ = "0.1.0"
