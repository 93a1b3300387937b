"""Exact enumeration and identity checks for tree-child network counting.

Word classes, Young tableaux with walls and holes, weighted lattice paths,
truncated power series and the exact k=1 parameter distributions.
"""

__version__ = "0.1.0"
