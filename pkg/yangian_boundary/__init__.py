"""
Reflection matrices of orthosymplectic Yangian R matrices and the analytical
Bethe Ansatz of the corresponding open spin chains.
"""

from .boundary import Family, KSolution, catalog, make_k, verify_reflection
from .chain import ChainContext, spectrum
from .errors import ToolkitError
from .grading import GradingSpec, build_grading, parse_algebra
from .rmatrix import verify_crossing_unitarity, verify_ybe

__version__ = "0.1.0"

__all__ = [
    "ChainContext",
    "Family",
    "GradingSpec",
    "KSolution",
    "ToolkitError",
    "build_grading",
    "catalog",
    "make_k",
    "parse_algebra",
    "spectrum",
    "verify_crossing_unitarity",
    "verify_reflection",
    "verify_ybe",
]
