"""Tensor-product polynomial approximation on affine partitions.

The library provides 1D and tensor-product polynomial bases, interpolatory
quadrature rules, affine element geometry, the classical approximation
operators (Lagrange interpolation, continuous and discrete L2 projection,
mass lumping, embedded nodal sub-projectors and fluctuation operators),
numerical norm evaluation, and a harness of named, reproducible studies
that verify convergence rates and inequalities at desk scale.
"""

from tpfem.geometry import (
    AffineMap,
    ElementMetrics,
    Face,
    Mesh,
    affine_map,
    build_cartesian_mesh,
    faces,
    identity_map,
    metrics,
)
from tpfem.fields import (
    DifferenceField,
    ScalarField,
    manufactured_field,
)
from tpfem.operators import (
    ControlVolumeDecomposition,
    ElementPolynomial,
    LumpedField,
    commutation_error,
    discrete_inner_product,
    discrete_l2_project,
    embedded_project,
    fluctuation,
    interpolate,
    l2_project,
    lagrange_square_sum,
    lump,
    random_polynomial,
)
from tpfem.norms import (
    MassMatrix,
    NormSpec,
    discrete_lp_norm,
    face_norm,
    integrate,
    lp_norm,
    mass_matrix,
    mass_matrix_extremes,
    sobolev_seminorm,
)
from tpfem.polybasis import (
    LagrangeBasis1D,
    NodeSet1D,
    chebyshev_eval,
    lagrange_basis,
    lagrange_derivative,
    lagrange_eval,
    legendre_derivative,
    legendre_eval,
    multi_indices,
    tensor_basis_eval,
    timan_example_eval,
)
from tpfem.quadrature import (
    QuadRule1D,
    QuadRuleTensor,
    MappedRule,
    degree_of_precision,
    equispaced_rule,
    gauss_lobatto_rule,
    gauss_rule,
    map_rule,
    rule_for,
    tensor_rule,
    tensorize,
)
from tpfem.studies import (
    RateReport,
    StudyConfig,
    run_study,
    slope_fit,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
