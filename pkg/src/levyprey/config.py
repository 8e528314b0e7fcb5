"""Flat ``key = value`` run configuration.

UTF-8 text, ``#`` comments, one assignment per line, processed top to
bottom: a ``preset = NAME`` line bulk-applies that scenario's values, and
any line after it overrides individual keys. Unknown keys are rejected by
name; missing keys fall back to documented defaults (the ``fig1`` scenario,
seed 0, 100 replicates).

The parser enforces the same structural constraints as the model types
(jump marks > -1, positive capacities, nonnegative rates) plus grid
resolvability (dt must divide every positive delay), reporting the offending
key and line. Regime-hypothesis failures are never parse errors; the one
soft condition surfaced here (predator death rate not exceeding predator
competition) becomes a warning on the parsed config.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .engine import StepConfig
from .model import DelaySpec, HistorySpec, ModelParams, NoiseSpec
from .presets import PRESETS

__all__ = ["ConfigError", "RunConfig", "parse_config", "parse_config_file"]


class ConfigError(ValueError):
    """Malformed or inconsistent run configuration."""


# every accepted key, in canonical serialization order
_FLOAT_KEYS = (
    "r1",
    "r2",
    "K1",
    "K2",
    "alpha1",
    "alpha2",
    "alpha3",
    "beta",
    "delta",
    "a1",
    "a2",
    "sigma1",
    "sigma2",
    "sigma3",
    "q1",
    "q2",
    "q3",
    "lambda",
    "tau1",
    "tau2",
    "tau3",
    "dt",
    "t_end",
    "x0",
    "y0",
    "z0",
)
_INT_KEYS = ("seed", "n_reps")
_STR_KEYS = ("preset", "output")
KEYS = _FLOAT_KEYS + _INT_KEYS + _STR_KEYS


def _scenario_values(name: str) -> dict[str, float]:
    s = PRESETS[name]
    p, n, d = s.params, s.noise, s.delays
    assert s.history.constant is not None  # presets use constant histories
    x0, y0, z0 = s.history.constant
    return {
        "r1": p.r1,
        "r2": p.r2,
        "K1": p.k1,
        "K2": p.k2,
        "alpha1": p.alpha1,
        "alpha2": p.alpha2,
        "alpha3": p.alpha3,
        "beta": p.beta,
        "delta": p.delta,
        "a1": p.a1,
        "a2": p.a2,
        "sigma1": n.sigma1,
        "sigma2": n.sigma2,
        "sigma3": n.sigma3,
        "q1": n.q1,
        "q2": n.q2,
        "q3": n.q3,
        "lambda": n.lam,
        "tau1": d.tau1,
        "tau2": d.tau2,
        "tau3": d.tau3,
        "dt": s.dt,
        "t_end": s.t_end,
        "x0": x0,
        "y0": y0,
        "z0": z0,
    }


_DEFAULTS: dict[str, object] = {**_scenario_values("fig1"), "seed": 0, "n_reps": 100}


@dataclass(frozen=True)
class RunConfig:
    """Fully resolved run configuration (all keys have values)."""

    values: dict[str, object]
    preset: str | None = None
    output: str | None = None
    explicit: frozenset[str] = field(default_factory=frozenset, compare=False)
    warnings: tuple[str, ...] = field(default=(), compare=False)

    def __getitem__(self, key: str) -> object:
        return self.values[key]

    @property
    def seed(self) -> int:
        return int(self.values["seed"])  # type: ignore[arg-type]

    @property
    def n_reps(self) -> int:
        return int(self.values["n_reps"])  # type: ignore[arg-type]

    @property
    def assumed_keys(self) -> tuple[str, ...]:
        """Preset-assumption keys the user did not override."""
        if self.preset is None:
            return ()
        return tuple(
            k for k in PRESETS[self.preset].assumed if k not in self.explicit
        )

    def replaced(self, **overrides: object) -> "RunConfig":
        """Copy with individual keys replaced (marked explicit)."""
        bad = set(overrides) - set(KEYS)
        if bad:
            raise ConfigError(f"unknown key(s): {sorted(bad)}")
        vals = dict(self.values)
        vals.update(overrides)
        cfg = RunConfig(
            values=vals,
            preset=self.preset,
            output=self.output,
            explicit=self.explicit | frozenset(overrides),
            warnings=self.warnings,
        )
        _check(cfg.values, {})
        return cfg

    # builders for the typed objects the engine consumes

    def to_params(self) -> ModelParams:
        v = self.values
        return ModelParams(
            r1=v["r1"],
            r2=v["r2"],
            k1=v["K1"],
            k2=v["K2"],
            alpha1=v["alpha1"],
            alpha2=v["alpha2"],
            alpha3=v["alpha3"],
            beta=v["beta"],
            delta=v["delta"],
            a1=v["a1"],
            a2=v["a2"],
        )

    def to_noise(self) -> NoiseSpec:
        v = self.values
        return NoiseSpec(
            sigma1=v["sigma1"],
            sigma2=v["sigma2"],
            sigma3=v["sigma3"],
            q1=v["q1"],
            q2=v["q2"],
            q3=v["q3"],
            lam=v["lambda"],
        )

    def to_delays(self) -> DelaySpec:
        v = self.values
        return DelaySpec(tau1=v["tau1"], tau2=v["tau2"], tau3=v["tau3"])

    def to_history(self) -> HistorySpec:
        v = self.values
        return HistorySpec.from_constant(v["x0"], v["y0"], v["z0"])

    def to_step_config(self) -> StepConfig:
        v = self.values
        return StepConfig(dt=v["dt"], t_end=v["t_end"], seed=self.seed)

    def to_text(self) -> str:
        """Canonical serialization; parsing it back reproduces this config."""
        lines = []
        if self.preset is not None:
            lines.append(f"preset = {self.preset}")
        for key in _FLOAT_KEYS:
            lines.append(f"{key} = {self.values[key]!r}")
        for key in _INT_KEYS:
            lines.append(f"{key} = {self.values[key]}")
        if self.output is not None:
            lines.append(f"output = {self.output}")
        return "\n".join(lines) + "\n"


def _check(values: dict[str, object], lines: dict[str, int]) -> None:
    """Structural validation; raises ConfigError naming key and line."""

    def where(key: str) -> str:
        ln = lines.get(key)
        return f" (line {ln})" if ln else ""

    for key in ("q1", "q2", "q3"):
        if values[key] <= -1.0:  # type: ignore[operator]
            raise ConfigError(f"{key} must be > -1{where(key)}: got {values[key]}")
    for key in ("sigma1", "sigma2", "sigma3", "lambda", "tau1", "tau2", "tau3",
                "x0", "y0", "z0", "r1", "r2", "alpha1", "alpha2", "alpha3",
                "beta", "delta", "a1", "a2"):
        if values[key] < 0:  # type: ignore[operator]
            raise ConfigError(f"{key} must be >= 0{where(key)}: got {values[key]}")
    for key in ("K1", "K2", "dt", "t_end"):
        if values[key] <= 0:  # type: ignore[operator]
            raise ConfigError(f"{key} must be > 0{where(key)}: got {values[key]}")
    if values["n_reps"] < 1:  # type: ignore[operator]
        raise ConfigError(f"n_reps must be >= 1{where('n_reps')}: got {values['n_reps']}")
    dt = float(values["dt"])  # type: ignore[arg-type]
    for key in ("tau1", "tau2", "tau3"):
        tau = float(values[key])  # type: ignore[arg-type]
        if tau == 0:
            continue
        k = round(tau / dt)
        if k < 1 or abs(k * dt - tau) > 1e-9 * max(1.0, tau):
            raise ConfigError(
                f"dt = {dt:g} must divide positive delay {key} = {tau:g}{where(key)}"
            )


def parse_config(text: str) -> RunConfig:
    """Parse a key=value document into a fully resolved RunConfig."""
    values: dict[str, object] = dict(_DEFAULTS)
    lines: dict[str, int] = {}
    explicit: set[str] = set()
    preset: str | None = None
    output: str | None = None

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {raw.strip()!r}")
        key, _, value = line.partition("=")
        key = key.strip()
        value = value.strip()
        if key not in KEYS:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
        if not value:
            raise ConfigError(f"line {lineno}: empty value for {key!r}")
        if key == "preset":
            if value not in PRESETS:
                raise ConfigError(
                    f"line {lineno}: unknown preset {value!r} "
                    f"(available: {', '.join(sorted(PRESETS))})"
                )
            # preset expansion does not mark keys explicit; later lines do
            preset = value
            scen = _scenario_values(value)
            values.update(scen)
            for k in scen:
                lines[k] = lineno
        elif key == "output":
            output = value
        elif key in _INT_KEYS:
            try:
                values[key] = int(value)
            except ValueError:
                raise ConfigError(
                    f"line {lineno}: {key} must be an integer, got {value!r}"
                ) from None
            lines[key] = lineno
            explicit.add(key)
        else:
            try:
                values[key] = float(value)
            except ValueError:
                raise ConfigError(
                    f"line {lineno}: {key} must be a number, got {value!r}"
                ) from None
            lines[key] = lineno
            explicit.add(key)

    _check(values, lines)

    warns: list[str] = []
    if values["delta"] <= values["alpha3"]:  # type: ignore[operator]
        warns.append(
            f"delta = {values['delta']} does not exceed alpha3 = {values['alpha3']}; "
            "the unique-global-solution condition is not certified"
        )
    return RunConfig(
        values=values,
        preset=preset,
        output=output,
        explicit=frozenset(explicit),
        warnings=tuple(warns),
    )


def parse_config_file(path: str) -> RunConfig:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path!r}: {exc}") from exc
    return parse_config(text)
