"""Exact covering numbers and injective hom-complexity of small finite
groups, with machine-checkable certificates."""

__version__ = "0.1.0"

from .cover import CoverInstance, CoverSolution, make_instance, min_cover, validate_cover
from .groups import (
    INFINITE,
    Cyclic,
    Dihedral,
    ExtNat,
    FiniteGroup,
    GeneralizedQuaternion,
    PermGroup,
    Power,
    Product,
    SemidirectPQ,
    build,
    build_semidirect_pq,
    element_order,
    finite,
    from_permutation_generators,
)
from .invariants import (
    CertEntry,
    InvariantReport,
    certificate_sound,
    check_bounds_sandwich,
    check_coordinate_injections,
    check_miller_moreno,
    check_product_inequality,
    check_subadditivity,
    check_to_zp_formula,
    check_triangle,
    ic,
    sigma,
    sigma_c,
    validate_optimal_ic_certificate,
)
from .iso import are_isomorphic, embeds, order_spectrum, spectrum_dominates
from .lattice import (
    Subgroup,
    SubgroupLattice,
    all_proper_subgroups_cyclic,
    all_subgroups,
    closure,
    cyclic_subgroups,
    maximal_filter,
    totient_cover_bound,
)

__all__ = [
    "INFINITE",
    "CertEntry",
    "CoverInstance",
    "CoverSolution",
    "Cyclic",
    "Dihedral",
    "ExtNat",
    "FiniteGroup",
    "GeneralizedQuaternion",
    "InvariantReport",
    "PermGroup",
    "Power",
    "Product",
    "SemidirectPQ",
    "Subgroup",
    "SubgroupLattice",
    "all_proper_subgroups_cyclic",
    "all_subgroups",
    "are_isomorphic",
    "build",
    "build_semidirect_pq",
    "certificate_sound",
    "check_bounds_sandwich",
    "check_coordinate_injections",
    "check_miller_moreno",
    "check_product_inequality",
    "check_subadditivity",
    "check_to_zp_formula",
    "check_triangle",
    "closure",
    "cyclic_subgroups",
    "element_order",
    "embeds",
    "finite",
    "from_permutation_generators",
    "ic",
    "make_instance",
    "maximal_filter",
    "min_cover",
    "order_spectrum",
    "sigma",
    "sigma_c",
    "spectrum_dominates",
    "totient_cover_bound",
    "validate_cover",
    "validate_optimal_ic_certificate",
]
