"""latmon: exact tools for lattice monoids in Z^d (d <= 3).

Membership, atoms, factorizations and length sets, and the subatomicity
hierarchy (atomic / nearly / almost / quasi-atomic, Furstenberg,
antimatter), all in exact integer and quadratic-surd arithmetic.
"""

from .exact import Scalar, Norm, ExactError, cf_expansion, convergents

__all__ = ["Scalar", "Norm", "ExactError", "cf_expansion", "convergents"]
__version__ = "0.1.0"
