"""Exact counting and constructive enumeration in finite projective and
affine geometries, treated as perfect matroid designs."""

from .gf import FieldElement, FieldSpec, field_make, field_of_order
from .geometry import AffinePoint, Basis, Hyperplane, ProjectivePoint, Subspace
from .counting import SpmdProfile, profile_ag, profile_free, profile_pg

__version__ = "0.1.0"
