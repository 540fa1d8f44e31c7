"""Budgeted allocation bandits: optimistic learning over discrete or
discretized-continuous per-resource budgets, with exact offline solving,
closed-form reward environments and regret bound evaluators."""

from .analysis import (
    BoundParams,
    CoverageObserver,
    CoverageReport,
    EnumerationInfeasibleError,
    GapReport,
    ReferenceInterval,
    RegretReport,
    ScalingReport,
    compute_continuous_reference,
    compute_gaps,
    compute_opt,
    coverage_diagnostic,
    dependent_regret_bound,
    independent_regret_bound,
    regret_series,
    scaling_check,
    split_discretization_regret,
)
from .continuous import DiscretizationPlan, plan_discretization, run_discretized
from .core import (
    ActionSpace,
    Allocation,
    ArmId,
    ProblemConfig,
    arm_at,
    arm_index,
    is_feasible,
    iter_feasible_levels,
)
from .environment import RewardModel
from .experiment import (
    ConfigurationError,
    ExperimentConfig,
    ExperimentSummary,
    ProblemParams,
    RewardParams,
    run_experiment,
)
from .learner import (
    ArmStats,
    RunTrace,
    UcbVector,
    compute_ucb,
    run,
    select_allocation,
    update,
)
from .oracle import (
    CoinFlipOracle,
    ExactDpSolver,
    GreedySolver,
    OracleResult,
    OracleSpec,
    allocation_value,
    build_solver,
    solve_exact_dp,
    solve_greedy,
)

__version__ = "0.1.0"

__all__ = [
    "ActionSpace",
    "Allocation",
    "ArmId",
    "ArmStats",
    "BoundParams",
    "CoinFlipOracle",
    "ConfigurationError",
    "CoverageObserver",
    "CoverageReport",
    "DiscretizationPlan",
    "EnumerationInfeasibleError",
    "ExactDpSolver",
    "ExperimentConfig",
    "ExperimentSummary",
    "GapReport",
    "GreedySolver",
    "OracleResult",
    "OracleSpec",
    "ProblemConfig",
    "ProblemParams",
    "ReferenceInterval",
    "RegretReport",
    "RewardModel",
    "RewardParams",
    "RunTrace",
    "ScalingReport",
    "UcbVector",
    "allocation_value",
    "arm_at",
    "arm_index",
    "build_solver",
    "compute_continuous_reference",
    "compute_gaps",
    "compute_opt",
    "compute_ucb",
    "coverage_diagnostic",
    "dependent_regret_bound",
    "independent_regret_bound",
    "is_feasible",
    "iter_feasible_levels",
    "plan_discretization",
    "regret_series",
    "run",
    "run_discretized",
    "run_experiment",
    "scaling_check",
    "select_allocation",
    "solve_exact_dp",
    "solve_greedy",
    "split_discretization_regret",
    "update",
    "__version__",
]
