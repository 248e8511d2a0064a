"""Run configuration: flat TOML key/value files with validated defaults."""
from __future__ import annotations

import dataclasses
import math
import sys
from dataclasses import dataclass, field
from typing import Optional, Tuple

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib
import tomli_w

from .channel import ENVIRONMENTS, Environment, RadioConfig
from .errors import ConfigError, InvalidParameterError
from .network import DeploymentSpec
from .pointprocess import DEFAULT_RADIUS, Region

CUSTOM = "custom"
SEED_ENV_VAR = "DRONENET_SEED"
CUSTOM_ENV_KEYS = ("env_a", "env_b", "eta_los_db", "eta_nlos_db")
METRIC_CHOICES = ("typical-se", "network-se", "counts")


@dataclass(frozen=True)
class RunConfig:
    environment: str = "dense-urban"
    env_a: Optional[float] = None
    env_b: Optional[float] = None
    eta_los_db: Optional[float] = None
    eta_nlos_db: Optional[float] = None

    lambda_terrestrial: float = 20.0
    lambda_users: float = 200.0
    lambda_drones: float = 10.0
    small_fraction: float = 0.9
    drones_enabled: bool = True
    fixed_users: bool = False

    carrier_frequency_hz: float = 2.5e9
    light_speed: float = 3e8
    path_loss_exponent: float = 4.0
    noise_power: float = 1e-15
    tx_power_terrestrial: float = 2.0
    tx_power_big: float = 40.0
    tx_power_small: float = 5.0
    altitude_big: float = 3000.0
    altitude_small: float = 150.0

    radius: float = DEFAULT_RADIUS
    analysis_radius: Optional[float] = None

    trials: int = 2000
    seed: int = 0
    n_jobs: int = 1
    grid: Optional[Tuple[float, ...]] = None
    output: Optional[str] = None
    metric: str = "typical-se"

    def __post_init__(self):
        if self.trials < 2:
            raise ConfigError(f"trials: expected an integer >= 2, got {self.trials}")
        if self.n_jobs < 1:
            raise ConfigError(f"n_jobs: expected an integer >= 1, got {self.n_jobs}")
        if self.metric not in METRIC_CHOICES:
            raise ConfigError(f"metric: expected one of {METRIC_CHOICES}, got {self.metric!r}")
        if self.grid is not None:
            object.__setattr__(self, "grid", tuple(float(v) for v in self.grid))
        # build everything once so range errors surface at parse time
        try:
            self.deployment_spec()
        except InvalidParameterError as exc:
            raise ConfigError(str(exc)) from None

    def environment_params(self) -> Environment:
        custom = [getattr(self, k) for k in CUSTOM_ENV_KEYS]
        if self.environment == CUSTOM:
            missing = [k for k, v in zip(CUSTOM_ENV_KEYS, custom) if v is None]
            if missing:
                raise ConfigError(f"custom environment is missing {', '.join(missing)}")
            return Environment(*custom)
        if any(v is not None for v in custom):
            raise ConfigError(
                f"{', '.join(CUSTOM_ENV_KEYS)} are only allowed with environment = \"custom\""
            )
        if self.environment not in ENVIRONMENTS:
            raise ConfigError(
                f"environment: expected one of {sorted(ENVIRONMENTS) + [CUSTOM]}, "
                f"got {self.environment!r}"
            )
        return ENVIRONMENTS[self.environment]

    def radio(self) -> RadioConfig:
        return RadioConfig(
            carrier_frequency_hz=self.carrier_frequency_hz,
            light_speed=self.light_speed,
            path_loss_exponent=self.path_loss_exponent,
            noise_power=self.noise_power,
            tx_power_terrestrial=self.tx_power_terrestrial,
            tx_power_big=self.tx_power_big,
            tx_power_small=self.tx_power_small,
            altitude_big=self.altitude_big,
            altitude_small=self.altitude_small,
        )

    def deployment_spec(self) -> DeploymentSpec:
        return DeploymentSpec(
            lambda_terrestrial=self.lambda_terrestrial,
            lambda_users=self.lambda_users,
            lambda_drones=self.lambda_drones,
            small_fraction=self.small_fraction,
            env=self.environment_params(),
            radio=self.radio(),
            region=Region(self.radius, self.analysis_radius),
            drones_enabled=self.drones_enabled,
            fixed_users=self.fixed_users,
        )

    def replace(self, **changes) -> "RunConfig":
        return dataclasses.replace(self, **changes)


_FIELDS = {f.name: f for f in dataclasses.fields(RunConfig)}


def _coerce(key, value):
    kind = _FIELDS[key].type
    if "bool" in kind:
        if not isinstance(value, bool):
            raise ConfigError(f"{key}: expected true or false, got {value!r}")
        return value
    if "int" in kind and "float" not in kind:
        if isinstance(value, bool) or not isinstance(value, int):
            raise ConfigError(f"{key}: expected an integer, got {value!r}")
        return value
    if "Tuple" in kind:
        if not isinstance(value, list) or not all(
            isinstance(v, (int, float)) and not isinstance(v, bool) for v in value
        ):
            raise ConfigError(f"{key}: expected a list of numbers, got {value!r}")
        return tuple(float(v) for v in value)
    if "float" in kind:
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise ConfigError(f"{key}: expected a number, got {value!r}")
        if not math.isfinite(value):
            raise ConfigError(f"{key}: expected a finite number, got {value!r}")
        return float(value)
    if not isinstance(value, str):
        raise ConfigError(f"{key}: expected a string, got {value!r}")
    return value


def parse_config(text: str) -> RunConfig:
    """Parse TOML text; keys left out keep their defaults.

    >>> parse_config('environment = "sub-urban"').environment_params().a
    4.88
    """
    try:
        raw = tomllib.loads(text)
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"malformed config: {exc}") from None
    values = {}
    for key, value in raw.items():
        if key not in _FIELDS:
            raise ConfigError(f"unknown config key {key!r}")
        values[key] = _coerce(key, value)
    return RunConfig(**values)


def load_config(path) -> RunConfig:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc.strerror}") from None
    return parse_config(text)


def render_config(config: RunConfig) -> str:
    """Inverse of :func:`parse_config`; ``None`` fields are omitted."""
    out = {}
    for name in _FIELDS:
        value = getattr(config, name)
        if value is None:
            continue
        out[name] = list(value) if isinstance(value, tuple) else value
    return tomli_w.dumps(out)
