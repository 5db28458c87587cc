"""Optimally balanced pay-as-you-go designs from overlapping-generations equilibria."""

__version__ = "0.1.0"
