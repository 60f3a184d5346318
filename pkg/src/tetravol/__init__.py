"""Exact identities among signed tetrahedron volumes of labeled 3D point sets."""

from .discovery import MonomialSpace, build_matrix, discover, enumerate_monomials
from .errors import (CalibrationError, DegenerateAngle, DegenerateConfiguration,
                     InfeasibleProfile, InvalidTetra, NoCircle, NotEmbeddable,
                     TetravolError, TooLarge, UnstableKernel, UnsupportedArity)
from .exact import Configuration, random_configuration, signed_volume
from .identities import (Identity, apply_permutation, bracket_expression, complement_volume,
                         eq9_identities, evaluate, make_tetra, orbit)
from .linalg import nullspace
from .poly import SparsePolynomial, expand_identity, is_zero, volume_polynomial

__version__ = "0.1.0"
