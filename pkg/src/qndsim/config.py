"""Scenario configuration: a flat ``key = value`` text file.

Grammar: one ``key = value`` pair per line; ``#`` starts a comment; blank
lines are ignored; keys are case-sensitive and may appear once.  Recognized
keys and defaults are listed in :data:`DEFAULTS` (``signal`` and exactly one
of ``phi`` / ``tau1`` have no default).  Command-line flags override the
file, which overrides the defaults.
"""

import math
from dataclasses import dataclass, field

from .measurement import ProbeDirection, ProbeSpec, SetupParams
from .quad_grid import (
    VACUUM_VARIANCE,
    cat_wavefunction,
    fock_wavefunction,
    gaussian_wavefunction,
    make_grid,
)

SIGNAL_KINDS = ("gaussian", "fock", "cat")

DEFAULTS = {
    "signal_variance": "0.25",
    "signal_mean": "0.0",
    "fock_n": "1",
    "cat_displacement": "1.5",
    "cat_parity": "even",
    "probe_r": "0.0",
    "probe_direction": "squeezed",
    "grid_points": "1024",
    "x_max": "8.0",
    "x_lo": "0.2",
    "x_hi": "5.0",
    "sweep_points": "50",
    "n_samples": "100000",
    "seed": "0",
    "tau3": "0.99",
    "conditional_moments": "true",
}
KNOWN_KEYS = set(DEFAULTS) | {"signal", "phi", "tau1"}


class ConfigError(ValueError):
    """Invalid scenario configuration."""


@dataclass
class ScenarioConfig:
    signal: str
    setup: SetupParams
    probe: ProbeSpec
    grid_points: int
    x_max: float
    signal_variance: float = VACUUM_VARIANCE
    signal_mean: float = 0.0
    fock_n: int = 1
    cat_displacement: float = 1.5
    cat_parity: str = "even"
    x_lo: float = 0.2
    x_hi: float = 5.0
    sweep_points: int = 50
    n_samples: int = 100000
    seed: int = 0
    tau3: float = 0.99
    conditional_moments: bool = True
    source: dict = field(default_factory=dict)

    def grid(self):
        return make_grid(self.grid_points, self.x_max)

    def build_signal(self, grid=None):
        grid = grid or self.grid()
        if self.signal == "gaussian":
            return gaussian_wavefunction(grid, self.signal_mean, self.signal_variance)
        if self.signal == "fock":
            return fock_wavefunction(grid, self.fock_n)
        return cat_wavefunction(grid, self.cat_displacement, self.cat_parity)


def parse_text(text, origin="<config>"):
    """Parse ``key = value`` lines into a dict; reports ``origin:line`` on errors."""
    values = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{origin}:{lineno}: expected 'key = value', got {raw.strip()!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        if key not in KNOWN_KEYS:
            raise ConfigError(f"{origin}:{lineno}: unknown key {key!r}")
        if key in values:
            raise ConfigError(f"{origin}:{lineno}: duplicate key {key!r}")
        values[key] = value
    return values


def _number(values, key, kind=float):
    raw = values[key]
    try:
        if kind is int:
            val = int(raw)
        elif kind is bool:
            if raw.lower() not in ("true", "false", "1", "0", "yes", "no"):
                raise ValueError(raw)
            return raw.lower() in ("true", "1", "yes")
        else:
            val = float(raw)
    except ValueError:
        raise ConfigError(f"field {key!r}: cannot parse {raw!r} as {kind.__name__}") from None
    if not math.isfinite(val):
        raise ConfigError(f"field {key!r}: value must be finite, got {raw!r}")
    return val


def build_config(file_values, overrides=None):
    """Merge defaults < file < overrides and validate the result."""
    values = dict(DEFAULTS)
    values.update(file_values)
    for key, value in (overrides or {}).items():
        if key not in KNOWN_KEYS:
            raise ConfigError(f"override: unknown key {key!r}")
        values[key] = str(value)

    if "signal" not in values:
        raise ConfigError("missing required field 'signal' (one of gaussian, fock, cat)")
    signal = values["signal"].lower()
    if signal not in SIGNAL_KINDS:
        raise ConfigError(f"field 'signal': expected one of {SIGNAL_KINDS}, got {values['signal']!r}")

    has_phi, has_tau = "phi" in values, "tau1" in values
    if has_phi == has_tau:
        raise ConfigError("exactly one of the fields 'phi' and 'tau1' must be given")
    try:
        if has_phi:
            setup = SetupParams(_number(values, "phi"))
        else:
            setup = SetupParams.from_tau1(_number(values, "tau1"))
    except ValueError as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(f"field {'phi' if has_phi else 'tau1'!r}: {exc}") from None

    try:
        probe = ProbeSpec(_number(values, "probe_r"), values["probe_direction"].lower())
    except ValueError as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(f"field 'probe_r'/'probe_direction': {exc}") from None

    cfg = ScenarioConfig(
        signal=signal,
        setup=setup,
        probe=probe,
        grid_points=_number(values, "grid_points", int),
        x_max=_number(values, "x_max"),
        signal_variance=_number(values, "signal_variance"),
        signal_mean=_number(values, "signal_mean"),
        fock_n=_number(values, "fock_n", int),
        cat_displacement=_number(values, "cat_displacement"),
        cat_parity=values["cat_parity"].lower(),
        x_lo=_number(values, "x_lo"),
        x_hi=_number(values, "x_hi"),
        sweep_points=_number(values, "sweep_points", int),
        n_samples=_number(values, "n_samples", int),
        seed=_number(values, "seed", int),
        tau3=_number(values, "tau3"),
        conditional_moments=_number(values, "conditional_moments", bool),
        source=values,
    )
    _check_ranges(cfg)
    return cfg


def _check_ranges(cfg):
    checks = [
        ("grid_points", cfg.grid_points >= 16),
        ("x_max", cfg.x_max > 0),
        ("signal_variance", cfg.signal_variance > 0),
        ("fock_n", cfg.fock_n >= 0),
        ("cat_parity", cfg.cat_parity in ("even", "odd")),
        ("x_lo", 0 < cfg.x_lo < cfg.x_hi),
        ("sweep_points", cfg.sweep_points >= 2),
        ("n_samples", cfg.n_samples >= 1),
        ("seed", 0 <= cfg.seed < 2**64),
        ("tau3", 0 < cfg.tau3 < 1),
    ]
    for key, ok in checks:
        if not ok:
            raise ConfigError(f"field {key!r}: value {cfg.source.get(key)!r} out of range")


def load_config(path=None, overrides=None):
    file_values = {}
    if path is not None:
        with open(path, encoding="utf-8") as fh:
            file_values = parse_text(fh.read(), origin=str(path))
    return build_config(file_values, overrides)
