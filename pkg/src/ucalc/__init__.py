"""ucalc: exact verification toolkit for hyperbolic unitary groups over form rings."""

__version__ = "0.1.0"
