"""Pseudo-positive moment problems and signed Gauss-Jacobi-type cubature."""

from .polycore import MultiPoly, UniPoly, parse_poly, sphere_inner_product, sphere_integral_monomial
from .harmonics import SolidHarmonicBasis, build_basis, harmonic_dimension, surface_area
from .decompose import (
    DistributedMomentTable,
    LFDecomposition,
    MonomialMomentTable,
    apply_functional,
    distributed_from_monomial,
    is_positive_definite_classical,
    is_pseudo_positive_definite,
    laplace_fourier_decompose,
    monomial_from_distributed,
    reconstruct,
)
from .stieltjes import (
    AtomicMeasure,
    JacobiMatrix,
    MomentSequence,
    carleman_diagnostic,
    gauss_rule,
    orthogonal_recurrence,
    pushforward_sqrt,
    pushforward_square,
    tridiagonal_eigen,
)
from .cubature import (
    ComponentMeasureSet,
    PseudoCubature,
    SummabilityReport,
    discretize_sphere,
    functional_value,
    point_cubature,
    representability_check,
    solve_truncated,
    summability,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
