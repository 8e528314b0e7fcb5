"""Two-prey/one-predator stochastic delay simulator with Levy-type jumps.

Integrates sample paths of a delayed predator-prey system driven by
multiplicative Brownian noise and compensated compound-Poisson jumps,
evaluates the closed-form extinction/persistence thresholds, and checks
predicted regimes against Monte Carlo time averages.
"""

from .analysis import (
    Regime,
    RegimeReport,
    TimeAverageSeries,
    boundedness_check,
    classify,
    extinction_coefficients,
    persistence_report,
    predator_extinction_report,
    time_average,
)
from .engine import (
    HistoryBuffer,
    SimulationError,
    StepConfig,
    Trajectory,
    delayed_lookup,
    init_history,
    sample_jumps,
    simulate,
    step,
)
from .ensemble import (
    EnsembleStats,
    ToleranceSpec,
    VerificationOutcome,
    run_ensemble,
    verify_regime,
)
from .model import (
    DelaySpec,
    DelayedState,
    HistorySpec,
    ModelParams,
    NoiseSpec,
    State,
    ValidationReport,
    apply_jump,
    diffusion,
    drift,
    validate,
)
from .oracle import (
    ConvergenceTable,
    ReferenceSolution,
    convergence_study,
    rk4_self_convergence,
    solve_deterministic,
)
from .presets import PRESETS, SWEEPS, Scenario, SweepPreset

__version__ = "0.1.0"

__all__ = [
    "__version__",
    # model
    "State",
    "DelayedState",
    "ModelParams",
    "NoiseSpec",
    "DelaySpec",
    "HistorySpec",
    "ValidationReport",
    "drift",
    "diffusion",
    "apply_jump",
    "validate",
    # engine
    "StepConfig",
    "HistoryBuffer",
    "Trajectory",
    "SimulationError",
    "init_history",
    "delayed_lookup",
    "sample_jumps",
    "step",
    "simulate",
    # analysis
    "Regime",
    "RegimeReport",
    "TimeAverageSeries",
    "time_average",
    "extinction_coefficients",
    "predator_extinction_report",
    "persistence_report",
    "boundedness_check",
    "classify",
    # ensemble
    "EnsembleStats",
    "ToleranceSpec",
    "VerificationOutcome",
    "run_ensemble",
    "verify_regime",
    # oracle
    "ReferenceSolution",
    "ConvergenceTable",
    "solve_deterministic",
    "convergence_study",
    "rk4_self_convergence",
    # presets
    "Scenario",
    "SweepPreset",
    "PRESETS",
    "SWEEPS",
]
