"""Quantum Fisher information of thermal and ground-state probes."""

from .bounds import (
    BoundKind,
    BoundReport,
    classical_decay_bound,
    commuting_saturator,
    constrained_variance_bound,
    dynamical_bound,
    finite_T_bound,
    gapped_bound,
    gapped_saturator,
    local_bound,
)
from .engine import (
    QFIBreakdown,
    SLDOperator,
    dynamical_qfi,
    high_T_qfi,
    low_T_qfi,
    mean_value_fisher,
    measurement_fisher,
    qfi_from_rho_dot,
    qfi_lyapunov,
    qfi_thermal,
    rho_dot,
    rho_dot_finite_difference,
    sld,
)
from .errors import (
    DegeneracyError,
    DimensionError,
    NotHermitianError,
    QFIError,
    RankDeficientError,
    SingularMeasurementError,
    SizeGuardError,
)
from .ising import (
    IsingParams,
    TransferContext,
    dense_hamiltonian,
    figure1_datasets,
    log_qfi_parallel,
    partition_function_log,
    qfi_parallel,
    qfi_parallel_dense,
    qfi_parallel_derivative,
    qfi_parallel_limits,
    qfi_transverse,
    transfer_context,
)
from .operators import (
    SIGMA_X,
    SIGMA_Y,
    SIGMA_Z,
    DegeneracyPartition,
    EigenSystem,
    GibbsState,
    as_hermitian,
    degeneracy_partition,
    dephase,
    eigendecompose,
    gibbs_state,
    local_sum,
    random_hermitian,
    spectral_seminorm,
    variance,
)
from .opfile import load_operator, save_operator
from .superop import SuperopKind, apply_superop, generalized_variance

__version__ = "0.1.0"
