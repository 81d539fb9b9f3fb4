"""
Core algorithms: combinatorics, the layer graph, families, isoperimetry,
enumeration, containers and the acceptance suite.
"""
