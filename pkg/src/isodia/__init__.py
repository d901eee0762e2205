"""Isodiametric bounds for closed surfaces with a curvature lower bound."""

from .bounds import (
    BoundReport,
    RootSolveResult,
    bishop_bound,
    corollary_flat_constant,
    corollary_radius_bound,
    prop_bound,
    quartic_bound,
    report,
    root_bound,
    theorem_bound,
)
from .errors import ConvergenceFailure, DomainError, LambdaNotPositive, MeshError
from .geodesy import GeodesyReport, TriangleMesh, geodesy_report
from .spaceform import (
    NormalizedInvariants,
    SurfaceSummary,
    alpha_chi,
    lambda_chi,
    normalized_invariants,
    v_kappa,
    v_tilde,
    w_of_k,
)
from .surfaces import SurfaceModel, normalized_k, sample_mesh, summary

__version__ = "0.1.0"
