"""Finite racks, Hurwitz orbits, the plague automaton and cubic Nichols relations."""

__version__ = "0.1.0"
