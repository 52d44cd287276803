"""Exact integer fibers, saturation generating sets, and fiber random walks.

The package is organized bottom-up:

- :mod:`fiberwalk.vectors` and :mod:`fiberwalk.intlin` provide exact
  integer vector and matrix algebra (Smith normal form, kernel bases,
  lattice membership).
- :mod:`fiberwalk.binomial` builds pure-difference binomials from move
  vectors and enumerates saturation generating sets with verified
  combination witnesses.
- :mod:`fiberwalk.fiber` enumerates fibers, their move graphs, jump
  graphs, connecting radii, and minimal excursions between components.
- :mod:`fiberwalk.sampler` runs the random walks (single-move and
  combination proposals) with reproducible counter-based streams.
- :mod:`fiberwalk.models` bundles the worked instances used in tests and
  on the command line.
"""

from .binomial import (
    ConeGeneratorSet,
    GeneratorWitness,
    PureBinomial,
    SaturationResult,
    SignPattern,
    Side,
    binomial_from_move,
    cone_generators,
    iterated_subtraction,
    norm_bound,
    reduce_generating_set,
    saturation_generators,
    scientific_string,
    side_achieved,
    subtraction,
)
from .errors import (
    BudgetExceededError,
    DependentBasisError,
    FinitenessError,
    MatrixParseError,
)
from .fiber import (
    CoefficientVector,
    Excursion,
    Fiber,
    FiberGraph,
    FiberSpec,
    MinExcursionResult,
    coefficient_vector,
    components_csv,
    connected_components,
    connecting_radius,
    enumerate_fiber,
    fiber_from_json_dict,
    fiber_graph,
    jump_graph,
    min_excursion,
)
from .intlin import (
    IntMatrix,
    LatticeSolver,
    MoveBasis,
    SmithDecomposition,
    determinant,
    kernel_basis,
    kronecker,
    smith_normal_form,
    solve_integer,
)
from .models import (
    ModelInstance,
    bad_basis_family,
    no_three_factor,
    second_difference_family,
    simple_example,
)
from .rng import RandomStream
from .sampler import (
    ChainConfig,
    ChainTrace,
    ProposalStats,
    TargetWeight,
    bounded_excursion_walk,
    chi_square_statistic,
    component_hits,
    empirical_distribution,
    geometric_walk,
    naive_walk,
    poisson_tail_probability,
    poisson_walk,
    run_walk,
    truncated_poisson_walk,
    tv_distance,
)

__version__ = "0.1.0"

__all__ = [
    "BudgetExceededError",
    "ChainConfig",
    "ChainTrace",
    "CoefficientVector",
    "ConeGeneratorSet",
    "DependentBasisError",
    "Excursion",
    "Fiber",
    "FiberGraph",
    "FiberSpec",
    "FinitenessError",
    "GeneratorWitness",
    "IntMatrix",
    "LatticeSolver",
    "MatrixParseError",
    "MinExcursionResult",
    "ModelInstance",
    "MoveBasis",
    "ProposalStats",
    "PureBinomial",
    "RandomStream",
    "SaturationResult",
    "Side",
    "SignPattern",
    "SmithDecomposition",
    "TargetWeight",
    "bad_basis_family",
    "binomial_from_move",
    "bounded_excursion_walk",
    "chi_square_statistic",
    "coefficient_vector",
    "component_hits",
    "components_csv",
    "cone_generators",
    "connected_components",
    "connecting_radius",
    "determinant",
    "empirical_distribution",
    "enumerate_fiber",
    "fiber_from_json_dict",
    "fiber_graph",
    "geometric_walk",
    "iterated_subtraction",
    "jump_graph",
    "kernel_basis",
    "kronecker",
    "min_excursion",
    "naive_walk",
    "no_three_factor",
    "norm_bound",
    "poisson_tail_probability",
    "poisson_walk",
    "reduce_generating_set",
    "run_walk",
    "saturation_generators",
    "scientific_string",
    "second_difference_family",
    "side_achieved",
    "simple_example",
    "smith_normal_form",
    "solve_integer",
    "subtraction",
    "truncated_poisson_walk",
    "tv_distance",
]
