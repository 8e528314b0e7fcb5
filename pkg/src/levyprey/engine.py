"""Time stepping for the stochastic delayed system.

The scheme is explicit Euler for the drift, a multiplicative Brownian
increment, and a compensated compound-Poisson jump increment, per species i:

    S' = S + f_i(S, delays)*dt + sigma_i*S*sqrt(dt)*Z_i + q_i*S*(dN - lambda*dt)

with Z_i independent standard normals and dN the Poisson count of jump
arrivals during the step (one shared count for all species by default).
Multiple arrivals within a step collapse into the count, which is exact for
the compensator at first order. Strong order is 0.5 in the noise, and the
scheme reduces to explicit Euler on the deterministic core when all noise
is switched off.

Delay taps are resolved on the time grid: each positive delay must be an
integer multiple of dt (values are snapped with a warning otherwise), which
removes interpolation error at the taps. A small positivity floor masks the
rare discretization overshoot below zero; every clamp is counted so the
artifact stays observable. Components that are exactly zero stay zero: the
origin is absorbing under purely multiplicative terms, and clamping a true
zero upward would re-seed an extinct population.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from . import rng
from .model import DelaySpec, HistorySpec, ModelParams, NoiseSpec, State

__all__ = [
    "StepConfig",
    "HistoryBuffer",
    "Trajectory",
    "SimulationError",
    "init_history",
    "delayed_lookup",
    "sample_jumps",
    "step",
    "simulate",
]

# relative slack for "is this time on the grid" decisions
_GRID_TOL = 1e-9


class SimulationError(RuntimeError):
    """Integration fault: non-finite state or unusable step configuration."""


@dataclass(frozen=True)
class StepConfig:
    """Discretization: step size and horizon in days, RNG seed, clamp floor."""

    dt: float
    t_end: float
    seed: int = 0
    positivity_floor: float = 1e-12

    def __post_init__(self) -> None:
        if not math.isfinite(self.dt) or self.dt <= 0:
            raise ValueError(f"StepConfig.dt must be > 0, got {self.dt!r}")
        if not math.isfinite(self.t_end) or self.t_end <= 0:
            raise ValueError(f"StepConfig.t_end must be > 0, got {self.t_end!r}")
        if not math.isfinite(self.positivity_floor) or self.positivity_floor <= 0:
            raise ValueError(
                f"StepConfig.positivity_floor must be > 0, got {self.positivity_floor!r}"
            )

    @property
    def n_steps(self) -> int:
        return max(1, int(round(self.t_end / self.dt)))


class HistoryBuffer:
    """Grid-aligned (t, state) record covering at least [t_now - tau_max, t_now].

    Samples are spaced exactly dt apart, starting at ``t_start`` (the far end
    of the initial history window). The buffer only grows; at the horizons
    this engine targets the full record is a few megabytes, so nothing is
    evicted and the trajectory can be read straight out of it.
    """

    __slots__ = ("dt", "t_start", "xs", "ys", "zs")

    def __init__(self, dt: float, t_start: float) -> None:
        self.dt = dt
        self.t_start = t_start
        self.xs: list[float] = []
        self.ys: list[float] = []
        self.zs: list[float] = []

    def __len__(self) -> int:
        return len(self.xs)

    @property
    def t_now(self) -> float:
        return self.t_start + (len(self.xs) - 1) * self.dt

    def append(self, x: float, y: float, z: float) -> None:
        self.xs.append(x)
        self.ys.append(y)
        self.zs.append(z)

    def state_at(self, t: float) -> State:
        """State at time t: the stored sample when t is on the grid, else
        linear interpolation between the two neighbors."""
        u = (t - self.t_start) / self.dt
        last = len(self.xs) - 1
        i = round(u)
        if abs(u - i) <= _GRID_TOL * max(1.0, abs(u)):
            if i < 0 or i > last:
                raise ValueError(
                    f"lookup at t={t:g} outside buffered range "
                    f"[{self.t_start:g}, {self.t_now:g}]"
                )
            return State(self.xs[i], self.ys[i], self.zs[i])
        j = math.floor(u)
        if j < 0 or j + 1 > last:
            raise ValueError(
                f"lookup at t={t:g} outside buffered range [{self.t_start:g}, {self.t_now:g}]"
            )
        w = u - j
        return State(
            self.xs[j] + w * (self.xs[j + 1] - self.xs[j]),
            self.ys[j] + w * (self.ys[j + 1] - self.ys[j]),
            self.zs[j] + w * (self.zs[j + 1] - self.zs[j]),
        )


@dataclass(frozen=True)
class Trajectory:
    """One integrated sample path on [0, t_end].

    times       uniform grid including t=0
    states      (n+1, 3) array of (x, y, z) per grid point, all >= 0
    jump_log    (t, count_x, count_y, count_z) for every step with arrivals
    floor_hits  number of positivity-floor clamps across all steps
    """

    times: np.ndarray
    states: np.ndarray
    jump_log: tuple[tuple[float, int, int, int], ...]
    floor_hits: int

    @property
    def x(self) -> np.ndarray:
        return self.states[:, 0]

    @property
    def y(self) -> np.ndarray:
        return self.states[:, 1]

    @property
    def z(self) -> np.ndarray:
        return self.states[:, 2]

    @property
    def dt(self) -> float:
        return float(self.times[1] - self.times[0])


def lag_steps(d: DelaySpec, dt: float) -> tuple[int, int, int]:
    """Delay taps in whole steps. Positive delays must sit on the grid;
    off-grid values are snapped to the nearest multiple of dt with a warning.
    dt larger than a positive delay is unusable and rejected."""
    ks = []
    for name, tau in zip(("tau1", "tau2", "tau3"), d.taus):
        if tau == 0.0:
            ks.append(0)
            continue
        if dt > tau * (1.0 + _GRID_TOL):
            raise ValueError(f"dt={dt:g} exceeds positive delay {name}={tau:g}")
        k = int(round(tau / dt))
        if abs(k * dt - tau) > _GRID_TOL * max(1.0, tau):
            warnings.warn(
                f"{name}={tau:g} is not a multiple of dt={dt:g}; snapped to {k * dt:g}",
                stacklevel=2,
            )
        ks.append(k)
    return (ks[0], ks[1], ks[2])


def init_history(h: HistorySpec, d: DelaySpec, c: StepConfig) -> HistoryBuffer:
    """Populate a buffer at every grid point of [-tau_max, 0].

    Constant histories fill their value; table histories fill by linear
    interpolation between samples and must span the whole window.
    """
    kmax = max(lag_steps(d, c.dt))
    t_start = -kmax * c.dt
    if h.kind == "table":
        lo, hi = h.span()
        if lo > t_start + _GRID_TOL or hi < -_GRID_TOL:
            raise ValueError(
                f"history table spans [{lo:g}, {hi:g}] but must cover [{t_start:g}, 0]"
            )
    buf = HistoryBuffer(c.dt, t_start)
    for i in range(kmax + 1):
        t = (i - kmax) * c.dt
        s = h.value_at(t)
        buf.append(s.x, s.y, s.z)
    return buf


def delayed_lookup(b: HistoryBuffer, t: float, tau: float) -> State:
    """State at t - tau: stored sample when grid-aligned, else linear interpolation."""
    if tau < 0:
        raise ValueError(f"delay must be >= 0, got {tau!r}")
    return b.state_at(t - tau)


def sample_jumps(lam: float, dt: float, generator: np.random.Generator, size=None):
    """Poisson(lam*dt) jump count(s) for one step, drawn from the given stream."""
    if lam < 0:
        raise ValueError(f"jump rate must be >= 0, got {lam!r}")
    if dt <= 0:
        raise ValueError(f"dt must be > 0, got {dt!r}")
    draws = generator.poisson(lam * dt, size)
    if size is None:
        return int(draws)
    return draws


def _advance(x, y, z, xd1, yd2, xd3, yd3, pp, nn, z1, z2, z3, j1, j2, j3):
    """One raw update. pp/nn are the tuples prepared by _pack_params/_pack_noise;
    returns the three candidate values before floor handling."""
    (r1, r2, ik1, ik2, a1, a2, al1, al2, al3, beta, delta, dt) = pp
    (s1, s2, s3, q1, q2, q3, lam_dt) = nn
    fx = r1 * x * (1.0 - xd1 * ik1) - al1 * x * z + beta * x * y * z
    fy = r2 * y * (1.0 - yd2 * ik2) - al2 * y * z + beta * x * y * z
    fz = -delta * z - al3 * z * z + a1 * xd3 * z + a2 * yd3 * z
    nx = x + fx * dt + s1 * x * z1 + q1 * x * (j1 - lam_dt)
    ny = y + fy * dt + s2 * y * z2 + q2 * y * (j2 - lam_dt)
    nz = z + fz * dt + s3 * z * z3 + q3 * z * (j3 - lam_dt)
    return nx, ny, nz


def _pack_params(p: ModelParams, dt: float):
    return (
        p.r1,
        p.r2,
        1.0 / p.k1,
        1.0 / p.k2,
        p.a1,
        p.a2,
        p.alpha1,
        p.alpha2,
        p.alpha3,
        p.beta,
        p.delta,
        dt,
    )


def _pack_noise(n: NoiseSpec, dt: float):
    sqdt = math.sqrt(dt)
    return (
        n.sigma1 * sqdt,
        n.sigma2 * sqdt,
        n.sigma3 * sqdt,
        n.q1,
        n.q2,
        n.q3,
        n.lam * dt,
    )


def _floor_one(value: float, previous: float, floor: float) -> tuple[float, int]:
    # exact zeros propagate: the origin is absorbing, only positive states clamp
    if value < floor and previous > 0.0:
        return floor, 1
    return value, 0


def step(
    b: HistoryBuffer,
    t: float,
    p: ModelParams,
    n: NoiseSpec,
    d: DelaySpec,
    c: StepConfig,
    normals: tuple[float, float, float],
    jumps: tuple[int, int, int],
) -> tuple[State, int]:
    """Advance the state at time t by one step using the given draws.

    ``normals`` are the three standard-normal draws, ``jumps`` the Poisson
    arrival counts per species (equal entries under a shared clock). Returns
    the new state and the number of floor clamps it needed. The buffer is
    not modified; callers append.
    """
    u = (t - b.t_start) / c.dt
    m = round(u)
    if abs(u - m) > _GRID_TOL * max(1.0, abs(u)) or m < 0 or m >= len(b):
        raise ValueError(f"step time t={t:g} is not a buffered grid point")
    k1, k2, k3 = lag_steps(d, c.dt)
    if m - max(k1, k2, k3) < 0:
        raise ValueError(f"buffer does not cover [t - tau_max, t] at t={t:g}")
    pp = _pack_params(p, c.dt)
    nn = _pack_noise(n, c.dt)
    x, y, z = b.xs[m], b.ys[m], b.zs[m]
    nx, ny, nz = _advance(
        x,
        y,
        z,
        b.xs[m - k1],
        b.ys[m - k2],
        b.xs[m - k3],
        b.ys[m - k3],
        pp,
        nn,
        normals[0],
        normals[1],
        normals[2],
        jumps[0],
        jumps[1],
        jumps[2],
    )
    if not (math.isfinite(nx) and math.isfinite(ny) and math.isfinite(nz)):
        raise SimulationError(
            f"non-finite state after step at t={t:g}: state=({x:g},{y:g},{z:g}), "
            f"normals={normals}, jumps={jumps}"
        )
    floor = c.positivity_floor
    nx, h1 = _floor_one(nx, x, floor)
    ny, h2 = _floor_one(ny, y, floor)
    nz, h3 = _floor_one(nz, z, floor)
    return State(nx, ny, nz), h1 + h2 + h3


def simulate(
    p: ModelParams,
    n: NoiseSpec,
    d: DelaySpec,
    h: HistorySpec,
    c: StepConfig,
    *,
    replicate: int = 0,
) -> Trajectory:
    """Integrate one sample path over [0, t_end].

    The Gaussian and Poisson draws come from disjoint streams derived from
    (c.seed, replicate), so identical inputs give bit-identical trajectories
    and toggling jumps leaves the Brownian path untouched.
    """
    k1, k2, k3 = lag_steps(d, c.dt)
    buf = init_history(h, d, c)
    n_steps = c.n_steps
    dt = c.dt
    floor = c.positivity_floor

    gauss = rng.stream(c.seed, replicate, rng.GAUSSIAN)
    jump_stream = rng.stream(c.seed, replicate, rng.JUMPS)
    normals = gauss.standard_normal((n_steps, 3)).tolist()
    lam_dt = n.lam * dt
    if n.shared_clock:
        shared_counts = jump_stream.poisson(lam_dt, n_steps).tolist()
        counts = None
    else:
        counts = jump_stream.poisson(lam_dt, (n_steps, 3)).tolist()
        shared_counts = None

    pp = _pack_params(p, dt)
    nn = _pack_noise(n, dt)
    xs, ys, zs = buf.xs, buf.ys, buf.zs
    base = len(xs) - 1  # index of t = 0
    jump_log: list[tuple[float, int, int, int]] = []
    floor_hits = 0
    isfinite = math.isfinite

    for i in range(n_steps):
        m = base + i
        if shared_counts is not None:
            j1 = j2 = j3 = shared_counts[i]
        else:
            j1, j2, j3 = counts[i]
        zr = normals[i]
        x, y, z = xs[m], ys[m], zs[m]
        nx, ny, nz = _advance(
            x,
            y,
            z,
            xs[m - k1],
            ys[m - k2],
            xs[m - k3],
            ys[m - k3],
            pp,
            nn,
            zr[0],
            zr[1],
            zr[2],
            j1,
            j2,
            j3,
        )
        if not (isfinite(nx) and isfinite(ny) and isfinite(nz)):
            raise SimulationError(
                f"non-finite state at t={(i + 1) * dt:g}: from ({x:g},{y:g},{z:g}), "
                f"normals=({zr[0]:g},{zr[1]:g},{zr[2]:g}), jumps=({j1},{j2},{j3})"
            )
        if nx < floor and x > 0.0:
            nx = floor
            floor_hits += 1
        if ny < floor and y > 0.0:
            ny = floor
            floor_hits += 1
        if nz < floor and z > 0.0:
            nz = floor
            floor_hits += 1
        xs.append(nx)
        ys.append(ny)
        zs.append(nz)
        if j1 or j2 or j3:
            jump_log.append(((i + 1) * dt, j1, j2, j3))

    times = np.arange(n_steps + 1) * dt
    states = np.empty((n_steps + 1, 3))
    states[:, 0] = xs[base:]
    states[:, 1] = ys[base:]
    states[:, 2] = zs[base:]
    return Trajectory(
        times=times, states=states, jump_log=tuple(jump_log), floor_hits=floor_hits
    )
