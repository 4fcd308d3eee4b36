"""Simulation of a tunable quantum-nondemolition measurement of a field quadrature."""

__version__ = "0.1.0"

from .errors import (
    GridError,
    NormalizationError,
    OptimizationError,
    QNDError,
    SupportError,
    UnderResolvedKernelError,
)
from .fidelity import gaussian_F, gaussian_G, grid_F, grid_G, statistical_fidelity
from .measurement import (
    Distribution,
    HomodyneOutcome,
    ProbeDirection,
    ProbeSpec,
    SetupParams,
    conditional_state,
    displacement_hardware,
    effective_sigma2,
    feedback_params,
    inferred_distribution,
    measurement_operator,
    nonselective_output,
    sample_outcomes,
    two_mode_oracle,
)
from .quad_grid import (
    GridDensityMatrix,
    GridSpec,
    GridWavefunction,
    displace,
    fock_wavefunction,
    gaussian_wavefunction,
    make_grid,
    overlap,
    pure_mixed_fidelity,
    squeeze,
    superpose,
)
from .tradeoff import (
    GAUSSIAN_OBJECTIVE,
    FixPhi,
    FixProbe,
    TradeoffPoint,
    equal_fidelity_point,
    numeric_frontier,
    optimize_sum,
    physical_from_x,
    probe_energy,
)
