"""gqswitch: exact construction and switching of strongly regular graphs
arising from generalized quadrangles.

The toolkit builds collinearity graphs of the symplectic and Hermitian
quadrangles, detects regular points and decomposes a graph there into a
(scheme, net, labeling) triple, reassembles with permuted labelings to
produce cospectral mates, deduplicates them by canonical form, and
certifies every structural claim with exact integer arithmetic.
"""
from .field import Field, FieldElement, conjugate, field_new, field_of_order
from .geometry import (
    GqOrder,
    Net,
    affine_plane,
    bilinear_forms_graph,
    hermitian_gq_graph,
    net_collinearity_graph,
    pg3_points,
    wq_graph,
)
from .graphcore import (
    Graph,
    Graph6Error,
    common_neighbors,
    distance_partition,
    graph6_decode,
    graph6_encode,
    induced_subgraph,
    maximal_cliques_of_size,
)
from .isocanon import (
    PermGroup,
    are_isomorphic,
    automorphism_generators,
    automorphism_group_order,
    canonical_form,
    canonical_labeling,
    is_collineation,
    isomorphism_map,
    type_swapping_automorphism,
)
from .regpoint import RegularPointData, decompose, is_regular_point, regular_points, span
from .specalg import (
    SchemePartition,
    SrgParams,
    check_antipodal_cover,
    check_spectrum_by_annihilation,
    check_srg,
    eigenmatrix,
    pseudo_gq_order,
    scheme_on_second_subconstituent,
    verify_subconstituent_equations,
)
from .store import GraphStore
from .switchkit import (
    add_spread,
    assemble,
    find_spreads,
    gm_switch,
    remove_spread,
    sweep_classes,
    switch_sigma,
)

__version__ = "0.1.0"
