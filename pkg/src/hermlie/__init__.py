"""Left-invariant Hermitian geometry on Lie algebras with a codimension-2 abelian ideal."""

from hermlie.errors import (
    DegenerateInput,
    GenerationFailed,
    HermlieError,
    InconsistentInstance,
    InstanceFormatError,
    InvalidFactor,
    NearDegenerate,
    PreconditionViolated,
    RangeConsistency,
)
from hermlie.linalg import Tolerance, DEFAULT_TOL
from hermlie.liealg import RealLieAlgebra, Subspace

__version__ = "0.1.0"

__all__ = [
    "DEFAULT_TOL",
    "DegenerateInput",
    "GenerationFailed",
    "HermlieError",
    "InconsistentInstance",
    "InstanceFormatError",
    "InvalidFactor",
    "NearDegenerate",
    "PreconditionViolated",
    "RangeConsistency",
    "RealLieAlgebra",
    "Subspace",
    "Tolerance",
]
