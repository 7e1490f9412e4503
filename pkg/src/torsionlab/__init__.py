"""Reidemeister torsion of chain complexes and of surface-group representations."""

from .chaincore import ChainComplex, HomologyBasis, TorsionValue, torsion
from .errors import TorsionLabError
from .fieldlin import QQ, Matrix, QuadraticField, RealField, field_from_name
from .liealg import build_basis
from .pairings import verify_main_theorem
from .surfcx import SurfaceRepresentation, build_twisted_complex, rep_torsion
from .sympcc import SymplecticChainComplex, torsion_via_symplectic

__version__ = "0.1.0"

__all__ = [
    "ChainComplex",
    "HomologyBasis",
    "Matrix",
    "QQ",
    "QuadraticField",
    "RealField",
    "SurfaceRepresentation",
    "SymplecticChainComplex",
    "TorsionLabError",
    "TorsionValue",
    "build_basis",
    "build_twisted_complex",
    "field_from_name",
    "rep_torsion",
    "torsion",
    "torsion_via_symplectic",
    "verify_main_theorem",
]
