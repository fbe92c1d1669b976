"""Lower bounds for the energy of graphs and real symmetric matrices."""

from .bounds import (
    BOUND_NAMES,
    BoundEntry,
    BoundNotApplicable,
    BoundReport,
    SpectralCounts,
    bound_caporossi,
    bound_component_log,
    bound_gamma_log,
    bound_gamma_log_nonsingular,
    bound_mcclelland,
    bound_nullity_frobenius,
    bound_nullity_log,
    bound_rayleigh_log,
    energy,
    gamma_limit,
    gamma_sequence,
    spectral_counts,
    spectral_profile,
    survey,
)
from .classify import (
    EqualityCertificate,
    StrictnessWitness,
    certify_equal_moduli,
    certify_unit_moduli,
    find_strictness_witness,
    match_bipartite_union,
    match_clique_matching_union,
)
from .graph6 import Graph6Error, parse_graph6, write_graph6
from .graphs import (
    DegreeVector,
    Graph,
    blowup,
    broom,
    complete,
    complete_bipartite,
    components,
    cycle,
    disjoint_union,
    join,
    k_degree,
    make_family,
    path,
    star,
)
from .linalg import (
    Spectrum,
    SymMatrix,
    char_poly,
    eigen_symmetric,
    frobenius_sq,
    nullity,
    principal_minor_sum_oracle,
    rayleigh,
    upsilon,
    upsilon_rank,
)

__version__ = "0.1.0"
