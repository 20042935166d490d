"""Certificates for generic and specific identifiability of tensor rank decompositions."""
from .field import GF, QQ, PrimeField, RationalField
from .linalg import BACKEND
from .segre import Shape, derive
from .generic import GenericConfig, Verdict, VerdictKind, check_generic
from .specific import (Decomposition, SpecificConfig, SpecificStatus, check_specific,
                       load_fixture_555r7)

__all__ = ["GF", "QQ", "PrimeField", "RationalField", "BACKEND", "Shape", "derive",
           "GenericConfig", "Verdict", "VerdictKind", "check_generic",
           "Decomposition", "SpecificConfig", "SpecificStatus", "check_specific",
           "load_fixture_555r7"]
__version__ = "0.1.0"
