"""Exact-arithmetic dimensions and defectivity certificates for higher
secant varieties of even spinor varieties.

The skew chart [I_h | U] parametrizes the variety by sub-Pfaffian
coordinates; Terracini's lemma turns secant dimensions into ranks of
stacked tangent matrices over a large prime field, and orbit arguments
in the orthogonal group upgrade the probabilistic estimates to exact
certified values in the defective cases.
"""

from ._backend import BACKEND, HAS_NUMBA
from .exact import DEFAULT_PRIME, MERSENNE61
from .spinor import (
    SkewMatrix,
    SpinorPoint,
    enumerate_even_subsets,
    jacobian,
    pfaffian,
    pfaffian_partial,
    spinor_coordinates,
    sub_pfaffian,
)
from .terracini import (
    SecantReport,
    SecantStatus,
    affine_tangent_matrix,
    defect,
    expected_dimension,
    reproduce_tables,
    secant_dimension_estimate,
)
from .orthogonal import (
    AlgebraElement,
    CertificateVerdict,
    OrthogonalElement,
    StandardTriple,
    act_on_chart,
    base12_certificate,
    first_order_displacement,
    orbit_kernel_dimension,
    rnc_certificate,
    s7_certificate,
    so_basis,
    stability_rank_check,
    triple_differential_rank,
)

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "HAS_NUMBA",
    "DEFAULT_PRIME",
    "MERSENNE61",
    "SkewMatrix",
    "SpinorPoint",
    "enumerate_even_subsets",
    "jacobian",
    "pfaffian",
    "pfaffian_partial",
    "spinor_coordinates",
    "sub_pfaffian",
    "SecantReport",
    "SecantStatus",
    "affine_tangent_matrix",
    "defect",
    "expected_dimension",
    "reproduce_tables",
    "secant_dimension_estimate",
    "AlgebraElement",
    "CertificateVerdict",
    "OrthogonalElement",
    "StandardTriple",
    "act_on_chart",
    "base12_certificate",
    "first_order_displacement",
    "orbit_kernel_dimension",
    "rnc_certificate",
    "s7_certificate",
    "so_basis",
    "stability_rank_check",
    "triple_differential_rank",
    "__version__",
]
