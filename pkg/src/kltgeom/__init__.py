"""Exact and numerical checks for real forms of rational surfaces.

Subpackages by topic:

* :mod:`kltgeom.lattice`: Picard lattices of blow-ups of the plane.
* :mod:`kltgeom.models`: hyperboloid, Klein and Poincare models of ``H^n``.
* :mod:`kltgeom.actions`: discrete groups, Dirichlet domains and horoballs.
* :mod:`kltgeom.arrangements`: exact plane configurations over ``Q(zeta_3)``.
* :mod:`kltgeom.cohom`: ``H^1(Z/2, A)`` for finite groups and free matrix groups.
* :mod:`kltgeom.estimators`: scikit-learn style wrappers.
* :mod:`kltgeom.verify`: executable acceptance checks.
"""

from .actions import (
    GroupElementSet,
    HalfSpace,
    Polyhedron,
    complement_path,
    dirichlet_domain,
    proper_action_count,
    shrink_horoball,
    word_ball,
)
from .arrangements import CycloNum, ProjLine, ProjPoint, build_dual_hesse, check_pair
from .cohom import FiniteGroupTable, IntMatrix2, h1_z2, no_relation_search, semidirect_order2_classes
from .estimators import DirichletDomain, ModelTransformer
from .lattice import DivisorClass, PicardLattice, canonical_class, intersect
from .models import (
    HyperboloidPoint,
    Horoball,
    IdealPoint,
    Isometry,
    KleinPoint,
    PoincarePoint,
    classify_isometry,
    distance,
)

__version__ = "0.1.0"

__all__ = [
    "CycloNum",
    "DirichletDomain",
    "DivisorClass",
    "FiniteGroupTable",
    "GroupElementSet",
    "HalfSpace",
    "Horoball",
    "HyperboloidPoint",
    "IdealPoint",
    "IntMatrix2",
    "Isometry",
    "KleinPoint",
    "ModelTransformer",
    "PicardLattice",
    "PoincarePoint",
    "Polyhedron",
    "ProjLine",
    "ProjPoint",
    "build_dual_hesse",
    "canonical_class",
    "check_pair",
    "classify_isometry",
    "complement_path",
    "dirichlet_domain",
    "distance",
    "h1_z2",
    "intersect",
    "no_relation_search",
    "proper_action_count",
    "semidirect_order2_classes",
    "shrink_horoball",
    "word_ball",
]
