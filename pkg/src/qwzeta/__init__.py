"""Graph zeta functions on multigraphs and the quantum walks they determine."""
from .errors import (
    InputError,
    NonUnitaryError,
    NumericalError,
    ParseError,
    PreconditionError,
    QWZetaError,
    ResourceError,
    SingularityError,
)
from .graph import (
    Arc,
    Multigraph,
    SymmetricDigraph,
    build_symmetric_digraph,
    degree,
    load_graph,
    parse_graph,
    serialize_graph,
)
from .series import TruncatedSeries
from .zeta import (
    WeightScheme,
    edge_matrix,
    make_weights,
    weighted_adjacency,
    weighted_degree,
    zeta_euler,
    zeta_exponential,
    zeta_hashimoto,
    zeta_ihara_expression,
)
from .walk import (
    TransitionMatrix,
    WalkState,
    evolve,
    grover_coin,
    grover_transition,
    observe,
    shift_matrix,
    step,
    transition_from_weights,
)
from .unitarity import (
    GWParams,
    SatoParams,
    check_gw,
    check_sato,
    check_unitarity,
    construct_gw,
    construct_sato,
)
from .spectral import (
    char_poly,
    konno_sato_check,
    periodicity,
    spectrum,
    spectrum_report,
    t_matrix,
)

__version__ = "0.1.0"
