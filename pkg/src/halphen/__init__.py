"""Exact transforms of Lamé and Heun equations, with their monodromy tuples."""

__version__ = "0.1.0"
