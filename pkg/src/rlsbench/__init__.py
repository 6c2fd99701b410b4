"""Support recovery for ternary sparse signals from noisy underdetermined
linear measurements: subset-averaged least-squares solvers, random-matrix
theory checks, problem generators and a Monte-Carlo benchmark harness."""

__version__ = "0.1.0"

from .bench import (
    ResultRecord,
    SolverSpec,
    SweepConfig,
    brute_force_oracle,
    exact_recovery,
    records_to_csv,
    run_point,
    run_sweep,
)
from .instance import (
    DesignMatrix,
    ProblemInstance,
    Signal,
    gen_bernoulli_design,
    gen_gaussian_design,
    gen_observation,
    gen_signal,
    gen_toeplitz_design,
    generate_instance,
    read_instance,
    write_instance,
)
from .linalg import LstSqSolution, min_norm_least_squares, pseudo_inverse, subset_min_norm
from .solvers import (
    Candidate,
    DegenerateStepError,
    RlsParams,
    SignedSupport,
    majority_vote,
    omp,
    omp_single_step,
    peel_step,
    rawls,
    rls,
    rls_fixed_size,
    subset_sizes,
)
from .theory import (
    MpParams,
    empirical_error_norm,
    empirical_inverse_singular_mean,
    mp_density,
    mp_inverse_moment,
    predicted_error_norm,
)

__all__ = [
    "__version__",
    "Candidate",
    "DegenerateStepError",
    "DesignMatrix",
    "LstSqSolution",
    "MpParams",
    "ProblemInstance",
    "ResultRecord",
    "RlsParams",
    "Signal",
    "SignedSupport",
    "SolverSpec",
    "SweepConfig",
    "brute_force_oracle",
    "empirical_error_norm",
    "empirical_inverse_singular_mean",
    "exact_recovery",
    "gen_bernoulli_design",
    "gen_gaussian_design",
    "gen_observation",
    "gen_signal",
    "gen_toeplitz_design",
    "generate_instance",
    "majority_vote",
    "min_norm_least_squares",
    "mp_density",
    "mp_inverse_moment",
    "omp",
    "omp_single_step",
    "peel_step",
    "predicted_error_norm",
    "pseudo_inverse",
    "rawls",
    "read_instance",
    "records_to_csv",
    "rls",
    "rls_fixed_size",
    "run_point",
    "run_sweep",
    "subset_min_norm",
    "subset_sizes",
    "write_instance",
]
