"""siltlab: exact silting mutation, CW posets and stability charges
over bound quiver algebras."""

__version__ = "0.1.0"

from .algebra import (
    Algebra,
    QuiverSpec,
    build_bound_quiver_algebra,
    make_lambda,
    make_linear_a,
)
from .homotopy import (
    Category,
    Complex,
    cone,
    decompose,
    direct_sum,
    end_algebra,
    hom_basis,
    hom_dim,
    hom_window,
    is_isomorphic,
    k0_class,
    minimal_left_approximation,
    minimal_right_approximation,
    minimalize,
    projective_complex,
    shift,
)
from .silting import (
    SiltingPair,
    bongartz_left,
    bongartz_right,
    bounding_interval,
    enumerate_interval,
    irreducible_mutations,
    is_presilting,
    is_silting,
    left_mutation,
    pair_leq,
    pair_leq_bongartz,
    right_mutation,
    silting_leq,
    standard_silting,
    torsion_simple_labels,
    two_term_membership,
)
from .pairsposet import PairsPoset, build_pairs_poset, verify_cw_poset
from .topology import contractibility_check, homology, order_complex, sphere_check
from .stability import (
    CWPoint,
    classify_objects,
    embed_cw_point,
    euler_matrix,
    injectivity_probe,
    simple_classes,
    validate_point,
    vertex_charge,
)
from .arcoords import ZCoord, finiteness_survivors, z_hom_nonzero, z_suspend
