"""rainbow-decomp - desk-scale toolkit for rainbow spanning tree decompositions."""

__version__ = "0.1.0"
