"""Closed-form regime thresholds and running time averages.

Three exclusive long-run regimes can be certified from the parameters alone:

* extinction of everything, when every net log-growth margin is negative:
  c1 = r1 - sigma1^2/2, c2 = r2 - sigma2^2/2,
  c3 = a1*(K1/r1)*c1 + a2*(K2/r2)*c2 - delta - sigma3^2/2,
  and max{c1, c2, c3} < 0;

* predator extinction with both prey persisting in mean, when
  min{c1, c2, 1 - r1 + 2*r1/K1, 1 - r2 + 2*r2/K2} > 0 and the predator
  recruitment margin c4 = a1*K1 + a2*K2 - delta - sigma3^2/2 is <= 0;

* persistence in mean of all three species, when the prey lower bounds
  Lx = c1 / (1 - r1 + 2*r1/K1) and Ly (symmetric) are positive, the
  denominators are positive, and the predator margin
  a1*Lx + a2*Ly - delta - sigma3^2/2 is positive, in which case the
  time-averaged predator is bounded below by Lz = margin / alpha3.

The classifier also evaluates the ultimate-boundedness margins
B1 = sigma1^2 + q1^2*lambda + 2*r1 + beta*K2 - alpha1*K1 (and analogues)
and the unique-global-solution condition delta > alpha3. Integrals of the
jump marks against the arrival measure reduce to q^2*lambda because marks
are constant per species (see NoiseSpec).

Parameter sets satisfying none of the three hypotheses are reported as
Indeterminate: the sufficient conditions simply do not apply, and no regime
is predicted.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .engine import Trajectory
from .model import DelaySpec, ModelParams, NoiseSpec, parameter_fingerprint

__all__ = [
    "Regime",
    "RegimeReport",
    "TimeAverageSeries",
    "time_average",
    "extinction_coefficients",
    "predator_extinction_report",
    "persistence_report",
    "boundedness_check",
    "classify",
]


class Regime(str, Enum):
    EXTINCTION_ALL = "ExtinctionAll"
    PREDATOR_EXTINCT_PREY_PERSIST = "PredatorExtinctPreyPersist"
    ALL_PERSIST = "AllPersist"
    INDETERMINATE = "Indeterminate"


@dataclass(frozen=True)
class TimeAverageSeries:
    """Running time averages <s>(t) = (1/t) * integral of s over [0, t].

    Computed with the trapezoidal rule on the trajectory grid; the t=0 entry
    is defined as the initial state.
    """

    times: np.ndarray
    means: np.ndarray  # (n+1, 3)

    @property
    def x(self) -> np.ndarray:
        return self.means[:, 0]

    @property
    def y(self) -> np.ndarray:
        return self.means[:, 1]

    @property
    def z(self) -> np.ndarray:
        return self.means[:, 2]

    @property
    def terminal(self) -> np.ndarray:
        return self.means[-1]


def time_average(traj: Trajectory) -> TimeAverageSeries:
    """Trapezoidal running average of each species over [0, t]."""
    t = np.asarray(traj.times, dtype=float)
    s = np.asarray(traj.states, dtype=float)
    if len(t) == 0:
        raise ValueError("trajectory is empty")
    means = np.empty_like(s)
    means[0] = s[0]
    if len(t) > 1:
        seg = 0.5 * (s[1:] + s[:-1]) * np.diff(t)[:, None]
        integral = np.cumsum(seg, axis=0)
        means[1:] = integral / t[1:, None]
    return TimeAverageSeries(times=t.copy(), means=means)


def extinction_coefficients(p: ModelParams, n: NoiseSpec) -> tuple[float, float, float]:
    """Net log-growth margins (c1, c2, c3); all negative certifies extinction in mean."""
    if p.r1 == 0 or p.r2 == 0:
        raise ValueError("c3 is undefined when r1 or r2 is zero (divides by the growth rate)")
    c1 = p.r1 - n.sigma1**2 / 2.0
    c2 = p.r2 - n.sigma2**2 / 2.0
    c3 = p.a1 * (p.k1 / p.r1) * c1 + p.a2 * (p.k2 / p.r2) * c2 - p.delta - n.sigma3**2 / 2.0
    return (c1, c2, c3)


def predator_extinction_report(p: ModelParams, n: NoiseSpec) -> tuple[float, float]:
    """Predator recruitment margin c4 and the prey-side minimum m.

    The predator dies out while both prey persist in mean when m > 0 and
    c4 <= 0. m collects c1, c2 and the two prey denominators.
    """
    c1 = p.r1 - n.sigma1**2 / 2.0
    c2 = p.r2 - n.sigma2**2 / 2.0
    c4 = p.a1 * p.k1 + p.a2 * p.k2 - p.delta - n.sigma3**2 / 2.0
    d1 = 1.0 - p.r1 + 2.0 * p.r1 / p.k1
    d2 = 1.0 - p.r2 + 2.0 * p.r2 / p.k2
    return (c4, min(c1, c2, d1, d2))


def persistence_report(p: ModelParams, n: NoiseSpec) -> tuple[float, float, float, bool]:
    """Asymptotic lower bounds (Lx, Ly, Lz) for the time averages and whether
    the full-persistence hypothesis holds.

    Rejects parameter sets where a bound is undefined: a zero prey
    denominator, or alpha3 = 0 (it divides the predator bound).
    """
    d1 = 1.0 - p.r1 + 2.0 * p.r1 / p.k1
    d2 = 1.0 - p.r2 + 2.0 * p.r2 / p.k2
    if d1 == 0.0:
        raise ValueError("prey-1 denominator 1 - r1 + 2*r1/K1 is zero; bound undefined")
    if d2 == 0.0:
        raise ValueError("prey-2 denominator 1 - r2 + 2*r2/K2 is zero; bound undefined")
    if p.alpha3 == 0.0:
        raise ValueError("alpha3 is zero; predator bound Lz undefined")
    lx = (p.r1 - n.sigma1**2 / 2.0) / d1
    ly = (p.r2 - n.sigma2**2 / 2.0) / d2
    margin = p.a1 * lx + p.a2 * ly - p.delta - n.sigma3**2 / 2.0
    lz = margin / p.alpha3
    ok = lx > 0.0 and ly > 0.0 and margin > 0.0 and min(d1, d2) > 0.0
    return (lx, ly, lz, ok)


def boundedness_check(p: ModelParams, n: NoiseSpec) -> tuple[float, float, float, bool]:
    """Ultimate-boundedness margins (B1, B2, B3); all negative certifies
    stochastically ultimately bounded solutions."""
    j1 = n.q1**2 * n.lam
    j2 = n.q2**2 * n.lam
    j3 = n.q3**2 * n.lam
    b1 = n.sigma1**2 + j1 + 2.0 * p.r1 + p.beta * p.k2 - p.alpha1 * p.k1
    b2 = n.sigma2**2 + j2 + 2.0 * p.r2 + p.beta * p.k1 - p.alpha2 * p.k2
    b3 = (
        n.sigma3**2
        + j3
        + 2.0 * p.a1 * p.k1
        + 2.0 * p.a2 * p.k2
        - p.delta
        - p.alpha1 * p.k1
        - p.alpha2 * p.k2
    )
    return (b1, b2, b3, b1 < 0.0 and b2 < 0.0 and b3 < 0.0)


@dataclass(frozen=True)
class RegimeReport:
    """Every threshold value, which hypotheses hold, and the predicted regime.

    Bounds that are undefined for the given parameters (zero denominator,
    alpha3 = 0, r_i = 0) are None, with the reason recorded in the trace.
    """

    c1: float | None
    c2: float | None
    c3: float | None
    c4: float
    prey_min: float  # min{c1, c2, denom1, denom2} entering the predator-extinction test
    denom1: float
    denom2: float
    lx: float | None
    ly: float | None
    lz: float | None
    b1: float
    b2: float
    b3: float
    bounded: bool
    well_posed_ok: bool  # delta > alpha3
    extinction_ok: bool
    predator_extinction_ok: bool
    persistence_ok: bool
    predicted: Regime
    overlap: tuple[str, ...]
    trace: tuple[str, ...]
    provenance: str


def _fmt(v: float | None) -> str:
    return "undefined" if v is None else f"{v:.10g}"


def classify(p: ModelParams, n: NoiseSpec, d: DelaySpec) -> RegimeReport:
    """Evaluate every hypothesis and predict the regime.

    Pure function; never faults. Sub-checks that cannot be evaluated become
    trace entries. When several hypotheses hold simultaneously (possible for
    contrived parameters) the precedence is extinction > full persistence >
    predator extinction, and the overlap is flagged.
    """
    trace: list[str] = []
    trace.append(f"delays: tau = ({d.tau1:g}, {d.tau2:g}, {d.tau3:g}) days")

    well_posed = p.delta > p.alpha3
    trace.append(
        f"unique-global-solution condition delta > alpha3: "
        f"{p.delta:.10g} > {p.alpha3:.10g} -> {'holds' if well_posed else 'fails'}"
    )

    c1: float | None
    c2: float | None
    c3: float | None
    extinction_ok = False
    try:
        c1, c2, c3 = extinction_coefficients(p, n)
        extinction_ok = max(c1, c2, c3) < 0.0
        trace.append(
            f"extinction margins: c1 = {_fmt(c1)}, c2 = {_fmt(c2)}, c3 = {_fmt(c3)}; "
            f"max < 0 -> {'holds' if extinction_ok else 'fails'}"
        )
    except ValueError as exc:
        c1 = c2 = c3 = None
        trace.append(f"extinction margins not evaluable: {exc}")

    c4, prey_min = predator_extinction_report(p, n)
    denom1 = 1.0 - p.r1 + 2.0 * p.r1 / p.k1
    denom2 = 1.0 - p.r2 + 2.0 * p.r2 / p.k2
    predator_ok = prey_min > 0.0 and c4 <= 0.0
    trace.append(
        f"predator-extinction test: c4 = {_fmt(c4)} (need <= 0), "
        f"min{{c1, c2, 1-r1+2r1/K1, 1-r2+2r2/K2}} = {_fmt(prey_min)} (need > 0) "
        f"-> {'holds' if predator_ok else 'fails'}"
    )

    lx: float | None
    ly: float | None
    lz: float | None
    persistence_ok = False
    try:
        lx, ly, lz, persistence_ok = persistence_report(p, n)
        trace.append(
            f"persistence bounds: Lx = {_fmt(lx)}, Ly = {_fmt(ly)}, Lz = {_fmt(lz)}; "
            f"all positive with positive denominators -> "
            f"{'holds' if persistence_ok else 'fails'}"
        )
    except ValueError as exc:
        # the prey bounds stand on their own whenever the denominators do
        # (the predator-extinction regime quotes them even when Lz cannot
        # be formed, e.g. alpha3 = 0)
        lx = (p.r1 - n.sigma1**2 / 2.0) / denom1 if denom1 != 0.0 else None
        ly = (p.r2 - n.sigma2**2 / 2.0) / denom2 if denom2 != 0.0 else None
        lz = None
        trace.append(f"persistence bounds not evaluable: {exc}")

    b1, b2, b3, bounded = boundedness_check(p, n)
    trace.append(
        f"boundedness margins: B1 = {_fmt(b1)}, B2 = {_fmt(b2)}, B3 = {_fmt(b3)}; "
        f"all < 0 -> {'holds' if bounded else 'fails'}"
    )

    holding = []
    if extinction_ok:
        holding.append(Regime.EXTINCTION_ALL.value)
    if persistence_ok:
        holding.append(Regime.ALL_PERSIST.value)
    if predator_ok:
        holding.append(Regime.PREDATOR_EXTINCT_PREY_PERSIST.value)

    if extinction_ok:
        predicted = Regime.EXTINCTION_ALL
    elif persistence_ok:
        predicted = Regime.ALL_PERSIST
    elif predator_ok:
        predicted = Regime.PREDATOR_EXTINCT_PREY_PERSIST
    else:
        predicted = Regime.INDETERMINATE

    overlap: tuple[str, ...] = ()
    if len(holding) > 1:
        overlap = tuple(holding)
        trace.append(
            f"overlapping hypotheses {holding}; precedence picks {predicted.value}"
        )
    trace.append(f"predicted regime: {predicted.value}")

    return RegimeReport(
        c1=c1,
        c2=c2,
        c3=c3,
        c4=c4,
        prey_min=prey_min,
        denom1=denom1,
        denom2=denom2,
        lx=lx,
        ly=ly,
        lz=lz,
        b1=b1,
        b2=b2,
        b3=b3,
        bounded=bounded,
        well_posed_ok=well_posed,
        extinction_ok=extinction_ok,
        predator_extinction_ok=predator_ok,
        persistence_ok=persistence_ok,
        predicted=predicted,
        overlap=overlap,
        trace=tuple(trace),
        provenance=parameter_fingerprint(p, n, d),
    )
