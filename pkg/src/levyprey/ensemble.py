"""Monte Carlo replicate sets and empirical regime verification.

Replicate k draws from streams derived from (base_seed, k), so the set of
paths is fixed by the seed alone: execution order cannot change any result,
and replicates never share randomness. Per-gridpoint statistics (mean,
standard deviation, 2.5/50/97.5% quantiles) are collected on a decimated
stats grid to keep memory bounded on long horizons; terminal running
averages are computed exactly on the full integration grid, since those are
what the regime predictions speak about.

The asymptotic statements behind the regime classifier are checked at a
finite horizon with explicit tolerances: medians of terminal time averages
against an extinction ceiling and against slack-discounted persistence
bounds. The defaults (ceiling 0.05 population units, slack 0.2) are artifact
choices, configurable through ToleranceSpec.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Sequence

import numpy as np

from . import engine
from .analysis import Regime, RegimeReport, time_average
from .engine import SimulationError, StepConfig
from .model import DelaySpec, HistorySpec, ModelParams, NoiseSpec, parameter_fingerprint

__all__ = [
    "ToleranceSpec",
    "EnsembleStats",
    "VerificationOutcome",
    "run_ensemble",
    "verify_regime",
]

# cap on stats-grid points per ensemble; full grid is used when shorter
_MAX_STAT_POINTS = 2001


@dataclass(frozen=True)
class ToleranceSpec:
    """Finite-horizon surrogates for asymptotic claims.

    extinction  ceiling on a median terminal time average that counts as
                "tends to zero" (population units)
    slack       fractional slack on persistence lower bounds: observed
                medians must reach (1 - slack) * bound
    """

    extinction: float = 0.05
    slack: float = 0.2

    def __post_init__(self) -> None:
        if self.extinction <= 0:
            raise ValueError("extinction tolerance must be > 0")
        if not 0 <= self.slack < 1:
            raise ValueError("slack must be in [0, 1)")


@dataclass(frozen=True)
class EnsembleStats:
    """Aggregated replicate statistics.

    stat_times         decimated time grid used for pointwise statistics
    mean, sd           (m, 3) pointwise mean and standard deviation
    q025, q500, q975   (m, 3) pointwise quantile band
    terminal_averages  (n_replicates, 3) terminal running average per replicate
    floor_hits_total   positivity clamps summed over all replicates
    """

    n_replicates: int
    stat_times: np.ndarray
    mean: np.ndarray
    sd: np.ndarray
    q025: np.ndarray
    q500: np.ndarray
    q975: np.ndarray
    terminal_averages: np.ndarray
    floor_hits_total: int
    provenance: str

    @property
    def terminal_medians(self) -> np.ndarray:
        """Median over replicates of the terminal time averages, per species."""
        return np.median(self.terminal_averages, axis=0)


def run_ensemble(
    p: ModelParams,
    n: NoiseSpec,
    d: DelaySpec,
    h: HistorySpec,
    c: StepConfig,
    n_reps: int,
    base_seed: int,
    *,
    stats_stride: int | None = None,
    order: Sequence[int] | None = None,
) -> EnsembleStats:
    """Run n_reps independent replicates and aggregate their statistics.

    ``order`` optionally fixes the execution order of replicate indices; it
    exists to demonstrate that results are order-invariant, which holds
    because replicate k's randomness depends only on (base_seed, k) and
    aggregation reduces over the index axis.
    """
    if n_reps < 1:
        raise ValueError(f"n_reps must be >= 1, got {n_reps}")
    cfg = replace(c, seed=base_seed)
    n_points = cfg.n_steps + 1
    if stats_stride is None:
        stats_stride = max(1, math.ceil(n_points / _MAX_STAT_POINTS))
    if stats_stride < 1:
        raise ValueError("stats_stride must be >= 1")
    stat_idx = np.arange(0, n_points, stats_stride)
    if stat_idx[-1] != n_points - 1:
        stat_idx = np.append(stat_idx, n_points - 1)

    if order is None:
        schedule: Sequence[int] = range(n_reps)
    else:
        schedule = list(order)
        if sorted(schedule) != list(range(n_reps)):
            raise ValueError("order must be a permutation of range(n_reps)")

    paths = np.empty((n_reps, len(stat_idx), 3))
    terminal = np.empty((n_reps, 3))
    stat_times: np.ndarray | None = None
    floor_total = 0
    for k in schedule:
        try:
            traj = engine.simulate(p, n, d, h, cfg, replicate=k)
        except SimulationError as exc:
            raise SimulationError(f"replicate {k}: {exc}") from exc
        paths[k] = traj.states[stat_idx]
        terminal[k] = time_average(traj).terminal
        floor_total += traj.floor_hits
        if stat_times is None:
            stat_times = traj.times[stat_idx]

    assert stat_times is not None
    mean = paths.mean(axis=0)
    if n_reps > 1:
        sd = paths.std(axis=0, ddof=1)
    else:
        sd = np.zeros_like(mean)
    q025, q500, q975 = np.quantile(paths, (0.025, 0.5, 0.975), axis=0)
    return EnsembleStats(
        n_replicates=n_reps,
        stat_times=stat_times,
        mean=mean,
        sd=sd,
        q025=q025,
        q500=q500,
        q975=q975,
        terminal_averages=terminal,
        floor_hits_total=floor_total,
        provenance=parameter_fingerprint(p, n, d),
    )


@dataclass(frozen=True)
class VerificationOutcome:
    """Empirical check of a predicted regime against ensemble medians."""

    regime: Regime
    checkable: bool
    passed: bool | None
    details: tuple[str, ...]


def verify_regime(
    stats: EnsembleStats, report: RegimeReport, tol: ToleranceSpec = ToleranceSpec()
) -> VerificationOutcome:
    """Compare ensemble medians of terminal time averages to the prediction.

    Indeterminate predictions are not checkable (no sufficient condition
    applies), never pass/fail. Stats and report must come from the same
    parameter set.
    """
    if stats.provenance != report.provenance:
        raise ValueError(
            "provenance mismatch: ensemble stats and regime report come from "
            "different parameter sets"
        )
    med = stats.terminal_medians
    details: list[str] = [
        f"median terminal averages: <x> = {med[0]:.6g}, <y> = {med[1]:.6g}, "
        f"<z> = {med[2]:.6g} over {stats.n_replicates} replicates"
    ]

    if report.predicted is Regime.INDETERMINATE:
        details.append("no sufficient condition applies; nothing to verify")
        return VerificationOutcome(
            regime=report.predicted, checkable=False, passed=None, details=tuple(details)
        )

    if report.predicted is Regime.EXTINCTION_ALL:
        checks = [
            (f"<{s}> = {m:.6g} < {tol.extinction:g}", m < tol.extinction)
            for s, m in zip("xyz", med)
        ]
    elif report.predicted is Regime.PREDATOR_EXTINCT_PREY_PERSIST:
        assert report.lx is not None and report.ly is not None
        fx = (1.0 - tol.slack) * report.lx
        fy = (1.0 - tol.slack) * report.ly
        checks = [
            (f"<z> = {med[2]:.6g} < {tol.extinction:g}", med[2] < tol.extinction),
            (f"<x> = {med[0]:.6g} >= {fx:.6g}", med[0] >= fx),
            (f"<y> = {med[1]:.6g} >= {fy:.6g}", med[1] >= fy),
        ]
    else:  # AllPersist
        assert report.lx is not None and report.ly is not None and report.lz is not None
        targets = [
            (1.0 - tol.slack) * report.lx,
            (1.0 - tol.slack) * report.ly,
            (1.0 - tol.slack) * report.lz,
        ]
        checks = [
            (f"<{s}> = {m:.6g} >= {tgt:.6g}", m >= tgt)
            for s, m, tgt in zip("xyz", med, targets)
        ]

    passed = all(ok for _, ok in checks)
    details.extend(f"{text} -> {'ok' if ok else 'FAIL'}" for text, ok in checks)
    return VerificationOutcome(
        regime=report.predicted, checkable=True, passed=passed, details=tuple(details)
    )
