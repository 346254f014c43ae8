"""Exact and numerical tools for metric 2-step nilpotent Lie algebras."""

__version__ = "0.1.0"

from .construct import (  # noqa: E402
    DataSet,
    ExampleId,
    cotangent_double,
    example_catalog,
    flip_center_sign,
    from_data_set,
    heisenberg,
    modified_cotangent,
)
from .exactlin import RatMatrix, SymmetricForm  # noqa: E402
from .group import GroupPoint, LatticeSpec, group_inverse, group_multiply, lattice_closure_check  # noqa: E402
from .metgeo import (  # noqa: E402
    MetricNilLieAlgebra,
    curvature,
    geodesic,
    ricci,
    sectional_curvature,
)
from .nilalg import NilLieAlgebra, from_structure_constants, structure_report  # noqa: E402
from .reductive import (  # noqa: E402
    corank_decomposition,
    is_ad_invariant,
    isotropy_algebra,
    naturally_reductive_check,
)

__all__ = [
    "DataSet", "ExampleId", "GroupPoint", "LatticeSpec", "MetricNilLieAlgebra", "NilLieAlgebra",
    "RatMatrix", "SymmetricForm", "corank_decomposition", "cotangent_double", "curvature",
    "example_catalog", "flip_center_sign", "from_data_set", "from_structure_constants", "geodesic",
    "group_inverse", "group_multiply", "heisenberg", "is_ad_invariant", "isotropy_algebra",
    "lattice_closure_check", "modified_cotangent", "naturally_reductive_check", "ricci",
    "sectional_curvature", "structure_report",
]
