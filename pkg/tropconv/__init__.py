"""
tropconv

Exact and (1±ε)-approximate subset convolutions over tropical semirings,
the min-max / approximate min-sum equivalence reductions, and two
application solvers built on top of them.
"""

__version__ = "1.0.0"
