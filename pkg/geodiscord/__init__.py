"""
geodiscord: geometric discord and measurement-induced nonlocality bounds.

This package contains the components for bounding geometric discord (GD)
and measurement-induced nonlocality (MIN) of bipartite density matrices,
including the Bloch decomposition, the eigenvalue relaxation, a brute-force
measurement oracle and monogamy analysis for multi-qubit pure states.
"""

__version__ = "0.1.0"
