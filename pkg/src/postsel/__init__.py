"""Pre- and post-selected entangled systems: weak values, ABL probabilities,
pointer simulations and local hidden-variable checks."""

from . import catalog, lhv, pointer, qcore, tsvf
from .catalog import (
    CatalogEntry,
    all_up_x_post,
    epr_pair,
    generalized_tsv_catalog,
    ghz_boxes_pair,
    ghz_pre,
    hardy_pair,
    hardy_projection_prep,
    n_box_pair,
    single_particle_pair,
)
from .qcore import (
    OperatorSum,
    StateVector,
    apply,
    dense_matrix,
    eigendecompose,
    inner,
    make_state,
    site_basis_change,
)
from .tsvf import (
    GeneralizedTwoStateVector,
    TwoStateVector,
    abl_probabilities,
    check_certainty,
    weak_value,
    weak_value_generalized,
)

__version__ = "0.1.0"
