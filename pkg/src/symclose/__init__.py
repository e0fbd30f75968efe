"""Decide, certify and test when reflections or rotations about finitely many
subspaces of R^n generate the full orthogonal group."""

__version__ = "0.1.0"
