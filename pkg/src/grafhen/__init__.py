"""Homomorphic encryption over finite permutation groups with rewriting systems."""

__version__ = "0.1.0"
