"""eigeniso: graph isomorphism testing via eigenspace projections.

The solver certifies isomorphism by constructing an explicit vertex
permutation: eigenvalue degeneracies are broken by adding self-loops of
increasing weight, candidate assignments are scored by comparing sorted
rows of eigenspace projectors, and a linear assignment solve decides
feasibility of each round.  Non-isomorphism is reported either with a
spectral certificate or, after exhaustive search, as a heuristic
rejection.
"""

from .assignment import (
    LapSolution,
    count_zero_structure,
    is_unique_zero_assignment,
    solve_lap,
)
from .generators import (
    GeneratorSpec,
    brute_force_isomorphism,
    cospectral_fixture,
    generate,
    srg_fixture,
)
from .graph import (
    Graph,
    GraphFormatError,
    Permutation,
    apply_permutation,
    format_graph,
    identity_permutation,
    is_exact_isomorphism,
    load_graph,
    parse_graph,
    perturb,
    random_permutation,
    save_graph,
)
from .solver import (
    INCONCLUSIVE,
    ISOMORPHIC,
    NOT_ISOMORPHIC,
    GroupStructureMismatch,
    RoundRecord,
    SearchState,
    SolveReport,
    SolverOptions,
    build_cost_matrix,
    extract_permutation,
    find_permutation,
    is_isomorphic,
    sorted_row_distance,
)
from .spectral import (
    DEFAULT_EPS,
    EigenGroup,
    EigensolverError,
    SpectralDecomposition,
    delta_eig,
    eigendecompose,
    group_eigenvalues,
    projection,
    reconstruct,
    spectral_distance,
)

__version__ = "0.1.0"

__all__ = [
    "DEFAULT_EPS",
    "EigenGroup",
    "EigensolverError",
    "GeneratorSpec",
    "Graph",
    "GraphFormatError",
    "GroupStructureMismatch",
    "INCONCLUSIVE",
    "ISOMORPHIC",
    "LapSolution",
    "NOT_ISOMORPHIC",
    "Permutation",
    "RoundRecord",
    "SearchState",
    "SolveReport",
    "SolverOptions",
    "SpectralDecomposition",
    "apply_permutation",
    "brute_force_isomorphism",
    "build_cost_matrix",
    "cospectral_fixture",
    "count_zero_structure",
    "delta_eig",
    "eigendecompose",
    "extract_permutation",
    "find_permutation",
    "format_graph",
    "generate",
    "group_eigenvalues",
    "identity_permutation",
    "is_exact_isomorphism",
    "is_isomorphic",
    "is_unique_zero_assignment",
    "load_graph",
    "parse_graph",
    "perturb",
    "projection",
    "random_permutation",
    "reconstruct",
    "save_graph",
    "solve_lap",
    "sorted_row_distance",
    "spectral_distance",
    "srg_fixture",
]
