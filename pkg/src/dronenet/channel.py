"""Air-to-ground and terrestrial channel models.

Drone links use free-space loss plus the mean excess loss of the LoS/NLoS
groups, weighted by an elevation-dependent LoS probability (S-curve).  No
small-scale fading is applied to drone links.  Terrestrial links follow a
power law ``fade * d**-alpha`` with unit-mean exponential fading.

All functions broadcast over numpy arrays.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, InvalidParameterError
from .pointprocess import StreamLike, as_generator

SPEED_OF_LIGHT = 3e8


@dataclass(frozen=True)
class Environment:
    """S-curve constants ``a``, ``b`` and mean excess losses in dB."""

    a: float
    b: float
    eta_los_db: float
    eta_nlos_db: float

    def __post_init__(self):
        if not (self.a > 0 and self.b > 0):
            raise InvalidParameterError(f"a and b must be > 0, got a={self.a}, b={self.b}")
        if not self.eta_nlos_db >= self.eta_los_db >= 0:
            raise InvalidParameterError(
                "need eta_nlos_db >= eta_los_db >= 0, got "
                f"{self.eta_los_db}, {self.eta_nlos_db}"
            )

    @property
    def excess_gap_db(self) -> float:
        """``eta_los - eta_nlos``; never positive."""
        return self.eta_los_db - self.eta_nlos_db


# "urban" has no published quadruple, so it is deliberately missing
ENVIRONMENTS = {
    "dense-urban": Environment(12.08, 0.11, 1.6, 23.0),
    "sub-urban": Environment(4.88, 0.43, 0.1, 21.0),
    "high-rise": Environment(27.23, 0.08, 2.3, 34.0),
}


def get_environment(name: str) -> Environment:
    try:
        return ENVIRONMENTS[name]
    except KeyError:
        raise ConfigError(
            f"unknown environment {name!r}; choose one of {sorted(ENVIRONMENTS)}"
        ) from None


@dataclass(frozen=True)
class RadioConfig:
    carrier_frequency_hz: float = 2.5e9
    light_speed: float = SPEED_OF_LIGHT
    path_loss_exponent: float = 4.0
    noise_power: float = 1e-15
    tx_power_terrestrial: float = 2.0
    tx_power_big: float = 40.0
    tx_power_small: float = 5.0
    altitude_big: float = 3000.0
    altitude_small: float = 150.0

    def __post_init__(self):
        for name in (
            "carrier_frequency_hz", "light_speed", "noise_power", "tx_power_terrestrial",
            "tx_power_big", "tx_power_small", "altitude_big", "altitude_small",
        ):
            if not getattr(self, name) > 0:
                raise InvalidParameterError(f"{name} must be > 0, got {getattr(self, name)}")
        if not self.path_loss_exponent > 2:
            raise InvalidParameterError(
                f"path_loss_exponent must be > 2, got {self.path_loss_exponent}"
            )


def db_to_linear(db):
    return 10.0 ** (-np.asarray(db, dtype=float) / 10.0)


def linear_to_db(gain):
    return -10.0 * np.log10(gain)


def fspl_db(frequency_hz, distance, light_speed=SPEED_OF_LIGHT):
    """Friis free-space loss ``20 log10(4 pi f d / c)`` in dB."""
    frequency_hz = np.asarray(frequency_hz, dtype=float)
    distance = np.asarray(distance, dtype=float)
    if np.any(frequency_hz <= 0):
        raise InvalidParameterError("frequency must be > 0")
    if np.any(distance <= 0):
        raise InvalidParameterError("distance must be > 0; clamp before calling")
    return 20.0 * np.log10(4.0 * np.pi * frequency_hz * distance / light_speed)


def _check_geometry(altitude, horizontal_distance):
    altitude = np.asarray(altitude, dtype=float)
    horizontal_distance = np.asarray(horizontal_distance, dtype=float)
    if np.any(altitude <= 0):
        raise InvalidParameterError("altitude must be > 0")
    if np.any(horizontal_distance < 0):
        raise InvalidParameterError("horizontal distance must be >= 0")
    return altitude, horizontal_distance


def elevation_deg(altitude, horizontal_distance):
    """Elevation angle in degrees; ``r == 0`` gives 90."""
    altitude, horizontal_distance = _check_geometry(altitude, horizontal_distance)
    return np.degrees(np.arctan2(altitude, horizontal_distance))


def los_probability(altitude, horizontal_distance, env: Environment):
    theta = elevation_deg(altitude, horizontal_distance)
    return 1.0 / (1.0 + env.a * np.exp(-env.b * (theta - env.a)))


def nlos_probability(altitude, horizontal_distance, env: Environment):
    return 1.0 - los_probability(altitude, horizontal_distance, env)


def atg_pathloss_db(altitude, horizontal_distance, env: Environment, radio: RadioConfig):
    """Mean air-to-ground loss ``20 log10(d) + A * P_los + B`` in dB.

    ``A = eta_los - eta_nlos`` and ``B = 20 log10(4 pi f / c) + eta_nlos``; this
    equals the LoS/NLoS mixture of ``FSPL + eta``.
    """
    altitude, horizontal_distance = _check_geometry(altitude, horizontal_distance)
    p_los = los_probability(altitude, horizontal_distance, env)
    slant = np.hypot(altitude, horizontal_distance)
    offset = (
        20.0 * np.log10(4.0 * np.pi * radio.carrier_frequency_hz / radio.light_speed)
        + env.eta_nlos_db
    )
    return 20.0 * np.log10(slant) + env.excess_gap_db * p_los + offset


def atg_gain_linear(altitude, horizontal_distance, env: Environment, radio: RadioConfig):
    return db_to_linear(atg_pathloss_db(altitude, horizontal_distance, env, radio))


def terrestrial_gain(distance, alpha, fade=1.0):
    distance = np.asarray(distance, dtype=float)
    if np.any(distance <= 0):
        raise InvalidParameterError("distance must be > 0")
    if not alpha > 2:
        raise InvalidParameterError(f"alpha must be > 2, got {alpha}")
    fade = np.asarray(fade, dtype=float)
    if np.any(fade < 0):
        raise InvalidParameterError("fade must be >= 0")
    return fade * distance ** (-alpha)


def sample_fade(stream: StreamLike, size=None):
    """Unit-mean exponential power fade(s)."""
    return as_generator(stream).exponential(1.0, size)
