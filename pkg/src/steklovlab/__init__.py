"""steklovlab: a numerical laboratory for the biharmonic Steklov plate problem."""

__version__ = "0.1.0"
