"""mbcalc: combinatorial calculus for multibranched surfaces in 3-manifolds.

Surfaces are built with :func:`build` and never mutated; moves, invariants
and order checks all return fresh values.
"""
from .boundary import boundary_surface
from .catalog import hopf_family, random_surface, theta_torus
from .errors import MbsError, ValidationError
from .invariants import class_x_report, classify_branch, classify_sector, homology
from .model import (AssumptionRecord, Attachment, BranchModel, MultibranchedSurface, Sector,
                    SurfaceSig, build, canonical_code, euler_sectors, is_isomorphic)
from .moves import (applicable_ix, applicable_xi, apply_ix, apply_xi, equivalent, ih_neighbors,
                    spread_maximally)
from .order import check_certificate, euler_filter, hasse, minimality, star_replacement

__version__ = "0.1.0"

__all__ = [
    "AssumptionRecord", "Attachment", "BranchModel", "MbsError", "MultibranchedSurface", "Sector",
    "SurfaceSig", "ValidationError", "applicable_ix", "applicable_xi", "apply_ix", "apply_xi",
    "boundary_surface", "build", "canonical_code", "check_certificate", "class_x_report",
    "classify_branch", "classify_sector", "equivalent", "euler_filter", "euler_sectors", "hasse",
    "homology", "hopf_family", "ih_neighbors", "is_isomorphic", "minimality", "random_surface",
    "spread_maximally", "star_replacement", "theta_torus",
]
