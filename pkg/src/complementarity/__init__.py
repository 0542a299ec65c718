"""Electro-neutral lock-and-key charge distributions on a discretized domain.

Builds two pairs of zero-total-charge distributions whose pairwise
interaction forces attract within each pair and repel across pairs, and
checks every inequality numerically.
"""

from .errors import (
    ComplementarityError,
    ConfigError,
    ContractError,
    InputDomainError,
    NumericError,
    ResourceError,
)
from .kernel import Kernel, KernelFamily, eval_kernel
from .grid import (
    DomainGrid,
    Field,
    build_grid,
    inner_product,
    mean_value,
    scale_domain,
    total_charge,
)
from .operator import (
    OperatorMatrix,
    apply_operator,
    assemble_operator,
    interaction_force,
    r_one,
)
from .spectral import (
    FMatrix,
    SchwartzBounds,
    SpectralDecomposition,
    eigendecompose,
    f_matrix,
    is_neutral,
    project_neutral,
    schwartz_bounds,
    spectral_interaction,
)
from .construction import (
    PAIR_NAMES,
    FeasibleWindow,
    InteractionReport,
    Quartet,
    SearchResult,
    Verdict,
    build_quartet,
    feasible_alpha,
    quartet_interactions,
    search_parameters,
    verify_complementarity,
)
from .scaling import ScalingRow, ScalingStudy, scaling_study

__version__ = "0.1.0"
