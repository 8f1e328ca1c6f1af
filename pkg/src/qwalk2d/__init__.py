"""Two-dimensional discrete-time quantum walks with two- and four-level coins."""

from .core import (
    HADAMARD,
    CoinOperator,
    CoinParams,
    CoinState2,
    CoinState4,
    InvalidParameterError,
    WalkerState,
    check_unitary,
    grover_equivalent_init,
    make_coin_2d,
    make_coin_grover,
    new_state,
    random_state,
)
from .entanglement import (
    CALIBRATED_CONVENTION,
    NegativityResult,
    ReducedDensity,
    calibrate_convention,
    entanglement_sweep,
    grover_negativity,
    negativity,
    partial_transpose_x,
    reduced_density,
)
from .equivalence import (
    ResidualReport,
    distribution_distance,
    lemma1_residual,
    theorem1_residual,
    theorem2_residual,
    verify_pairing,
)
from .limit import (
    Eigensystem,
    LimitDensityParams,
    convergence_report,
    density_moment,
    density_normalization,
    eigensystem_closed_form,
    limit_density,
    limit_moment,
    step_matrix,
)
from .walks import (
    Alternate,
    Grover,
    ProbabilityGrid,
    WindowOverflowError,
    evolve,
    moments,
    probability_grid,
    recurrence_oracle_alternate,
    recurrence_oracle_grover,
    step_alternate,
    step_grover,
)

__version__ = "0.1.0"
