"""
containerlab - exact combinatorics for intersecting families and graph containers.

Counts intersecting k-uniform families, encodes them as independent sets of
the containment graph H(n,k,r), checks its isoperimetry and runs the graph
container algorithm with machine-checked certificates.
"""

__version__ = "0.1.0"
__all__ = ["__version__"]
