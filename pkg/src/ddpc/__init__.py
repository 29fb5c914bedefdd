"""Direct vs indirect data-driven predictive control of stochastic LTI systems.

Library layout:

- matops: dense matrix constructions and SVD-backed utilities
- lti: ground-truth systems, simulation, and trajectory operators
- task: the quadratic tracking task, optimal/certainty-equivalent inputs,
  and the suboptimality gap
- direct: design over the span of recorded behaviors plus the implicit
  model error and its tail bound
- indirect: Hankel reorganization, kernel-model identification, and the
  identified-model design
- experiments: seeded Monte-Carlo sweeps and the bound verification
- cli: the `ddpc` command-line harness writing CSV results
"""

from .direct import (
    BehaviorDataset,
    DirectDiagnostics,
    direct_design,
    direct_diagnostics,
    error_tail_bound,
    implicit_model_error,
)
from .experiments import (
    BoundCheckResult,
    ExperimentConfig,
    SweepResult,
    SweepRow,
    generate_dataset,
    summarize,
    sweep,
    verify_error_bound,
)
from .indirect import (
    HankelStack,
    KernelModel,
    build_hankel_stack,
    identify,
    indirect_design,
    kernel_io_map,
    true_kernel,
)
from .lti import (
    LtiSystem,
    Trajectory,
    extended_observability,
    input_output_map,
    noise_output_map,
    noise_output_variance,
    random_system,
    simulate,
)
from .task import (
    ControlTask,
    DesignOutcome,
    certainty_equivalent_input,
    convexity_constants,
    cost,
    montecarlo_expected_cost,
    optimal_input,
    suboptimality_gap,
)

__version__ = "0.1.0"

__all__ = [
    "BehaviorDataset",
    "BoundCheckResult",
    "ControlTask",
    "DesignOutcome",
    "DirectDiagnostics",
    "ExperimentConfig",
    "HankelStack",
    "KernelModel",
    "LtiSystem",
    "SweepResult",
    "SweepRow",
    "Trajectory",
    "build_hankel_stack",
    "certainty_equivalent_input",
    "convexity_constants",
    "cost",
    "direct_design",
    "direct_diagnostics",
    "error_tail_bound",
    "extended_observability",
    "generate_dataset",
    "identify",
    "implicit_model_error",
    "indirect_design",
    "input_output_map",
    "kernel_io_map",
    "montecarlo_expected_cost",
    "noise_output_map",
    "noise_output_variance",
    "optimal_input",
    "random_system",
    "simulate",
    "suboptimality_gap",
    "summarize",
    "sweep",
    "true_kernel",
    "verify_error_bound",
]
