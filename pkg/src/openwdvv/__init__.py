"""Exact constructions around the WDVV equations of simple singularities:
quotient algebras of A/D/E unfoldings, flat coordinates and Frobenius
potentials for A and D, open extensions with one boundary variable, and
the Coxeter-family potentials with their verification and classification
routines.  All arithmetic is exact (Gaussian rationals); every check is
a polynomial identity, never a numerical comparison.
"""

from .exactalg import GaussianRational, MPoly, PolyError, VarTable, parse, rat
from .report import Report, merge

__all__ = [
    "GaussianRational",
    "MPoly",
    "PolyError",
    "VarTable",
    "parse",
    "rat",
    "Report",
    "merge",
]
