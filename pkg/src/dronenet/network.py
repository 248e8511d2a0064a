"""Deployment sampling, max-received-power association and per-user SINR/SE.

Node arrays are ordered terrestrial BSs first, then big drones, then small
drones.  The fade matrix therefore lines up with the leading terrestrial
columns of the received-power matrix.

Pipeline for one realization: sample -> associate (mean power, fading
excluded) -> switch off nodes without users -> SINR (terrestrial fades
included on both signal and interference).
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field, replace
from typing import List, Optional

import numpy as np

from .channel import Environment, RadioConfig, atg_gain_linear, get_environment, sample_fade
from .errors import ConfigError, InvalidParameterError
from .pointprocess import RandomStream, Region, sample_ppp, sample_uniform_disk

MIN_TERRESTRIAL_DISTANCE = 1.0


class NodeKind(enum.IntEnum):
    TERRESTRIAL = 0
    BIG_DRONE = 1
    SMALL_DRONE = 2


@dataclass(frozen=True)
class DeploymentSpec:
    """Intensities are expected node counts inside the outer disk."""

    lambda_terrestrial: float = 20.0
    lambda_users: float = 200.0
    lambda_drones: float = 10.0
    small_fraction: float = 0.9
    env: Environment = field(default_factory=lambda: get_environment("dense-urban"))
    radio: RadioConfig = field(default_factory=RadioConfig)
    region: Region = field(default_factory=Region)
    drones_enabled: bool = True
    fixed_users: bool = False

    def __post_init__(self):
        if not 0 <= self.small_fraction <= 1:
            raise InvalidParameterError(
                f"small_fraction must lie in [0, 1], got {self.small_fraction}"
            )
        for name in ("lambda_terrestrial", "lambda_users", "lambda_drones"):
            if not getattr(self, name) >= 0:
                raise InvalidParameterError(f"{name} must be >= 0, got {getattr(self, name)}")

    @property
    def lambda_big(self) -> float:
        return (1.0 - self.small_fraction) * self.lambda_drones if self.drones_enabled else 0.0

    @property
    def lambda_small(self) -> float:
        return self.small_fraction * self.lambda_drones if self.drones_enabled else 0.0

    def with_(self, **changes) -> "DeploymentSpec":
        return replace(self, **changes)


@dataclass(frozen=True)
class Node:
    kind: NodeKind
    position: tuple
    altitude: float
    tx_power: float
    active: bool = True


@dataclass(frozen=True)
class Deployment:
    node_xy: np.ndarray  # (N, 2)
    node_kind: np.ndarray  # (N,) NodeKind values
    node_altitude: np.ndarray  # (N,)
    node_power: np.ndarray  # (N,)
    users: np.ndarray  # (U, 2)
    fades: np.ndarray  # (U, number of terrestrial nodes)

    @property
    def n_nodes(self) -> int:
        return len(self.node_kind)

    @property
    def n_users(self) -> int:
        return len(self.users)

    @property
    def n_terrestrial(self) -> int:
        return int(np.count_nonzero(self.node_kind == NodeKind.TERRESTRIAL))

    def nodes(self, active: Optional[np.ndarray] = None) -> List[Node]:
        if active is None:
            active = np.ones(self.n_nodes, dtype=bool)
        return [
            Node(NodeKind(k), (float(p[0]), float(p[1])), float(h), float(w), bool(a))
            for k, p, h, w, a in zip(
                self.node_kind, self.node_xy, self.node_altitude, self.node_power, active
            )
        ]


@dataclass(frozen=True)
class Association:
    serving: np.ndarray  # (U,) node index per user
    load: np.ndarray  # (N,) users per node
    active: np.ndarray  # (N,) bool


@dataclass(frozen=True)
class UserMetrics:
    sinr: np.ndarray
    se: np.ndarray
    shared_se: np.ndarray
    serving_kind: np.ndarray
    network_se: float
    counts_by_kind: np.ndarray  # users per NodeKind


def build_deployment(spec: DeploymentSpec, master_seed: int, trial_index: int) -> Deployment:
    """Sample one realization.

    Each process draws from its own labelled substream, so changing e.g. the
    small-drone fraction leaves terrestrial BSs and users untouched.
    """

    def stream(label):
        return RandomStream(master_seed, trial_index, label)

    radio = spec.radio
    region = spec.region
    bs = sample_ppp(spec.lambda_terrestrial, region, stream("bs"))
    big = sample_ppp(spec.lambda_big, region, stream("big"))
    small = sample_ppp(spec.lambda_small, region, stream("small"))
    if spec.fixed_users:
        users = sample_uniform_disk(int(round(spec.lambda_users)), region.radius, stream("users"))
    else:
        users = sample_ppp(spec.lambda_users, region, stream("users"))

    kinds = np.concatenate([
        np.full(len(bs), NodeKind.TERRESTRIAL),
        np.full(len(big), NodeKind.BIG_DRONE),
        np.full(len(small), NodeKind.SMALL_DRONE),
    ]).astype(int)
    altitude = np.array([0.0, radio.altitude_big, radio.altitude_small])[kinds]
    power = np.array(
        [radio.tx_power_terrestrial, radio.tx_power_big, radio.tx_power_small]
    )[kinds]
    fades = sample_fade(stream("fading"), (len(users), len(bs)))
    return Deployment(
        node_xy=np.concatenate([bs, big, small]).reshape(-1, 2),
        node_kind=kinds,
        node_altitude=altitude,
        node_power=power,
        users=users,
        fades=fades,
    )


def horizontal_distances(users: np.ndarray, nodes: np.ndarray) -> np.ndarray:
    diff = users[:, None, :] - nodes[None, :, :]
    return np.hypot(diff[..., 0], diff[..., 1])


def mean_received_power(deployment: Deployment, env: Environment, radio: RadioConfig) -> np.ndarray:
    """Average received power (W), shape ``(U, N)``; fading excluded."""
    r = horizontal_distances(deployment.users, deployment.node_xy)
    gain = np.empty_like(r)
    terrestrial = deployment.node_kind == NodeKind.TERRESTRIAL
    d = np.maximum(r[:, terrestrial], MIN_TERRESTRIAL_DISTANCE)
    gain[:, terrestrial] = d ** (-radio.path_loss_exponent)
    drones = ~terrestrial
    if drones.any():
        gain[:, drones] = atg_gain_linear(
            deployment.node_altitude[drones][None, :], r[:, drones], env, radio
        )
    return gain * deployment.node_power[None, :]


def instantaneous_power(deployment: Deployment, env: Environment, radio: RadioConfig,
                        mean_power: Optional[np.ndarray] = None) -> np.ndarray:
    """Received power with terrestrial fades applied, shape ``(U, N)``."""
    if mean_power is None:
        mean_power = mean_received_power(deployment, env, radio)
    power = mean_power.copy()
    power[:, deployment.node_kind == NodeKind.TERRESTRIAL] *= deployment.fades
    return power


def associate(deployment: Deployment, env: Environment, radio: RadioConfig,
              mean_power: Optional[np.ndarray] = None) -> Association:
    if deployment.n_nodes == 0:
        raise ConfigError("cannot associate users: deployment has no nodes")
    if mean_power is None:
        mean_power = mean_received_power(deployment, env, radio)
    # argmax returns the first maximum, i.e. lowest node index on ties
    serving = np.argmax(mean_power, axis=1) if deployment.n_users else np.zeros(0, dtype=int)
    load = np.bincount(serving, minlength=deployment.n_nodes)
    return Association(serving=serving, load=load, active=load > 0)


def compute_sinr(deployment: Deployment, association: Association, env: Environment,
                 radio: RadioConfig, power: Optional[np.ndarray] = None) -> np.ndarray:
    """Linear SINR of every user; only active nodes interfere."""
    if power is None:
        power = instantaneous_power(deployment, env, radio)
    users = np.arange(deployment.n_users)
    signal = power[users, association.serving]
    masked = np.where(association.active[None, :], power, 0.0)
    masked[users, association.serving] = 0.0
    interference = masked.sum(axis=1)
    return signal / (radio.noise_power + interference)


def compute_metrics(deployment: Deployment, association: Association, env: Environment,
                    radio: RadioConfig, users: Optional[np.ndarray] = None) -> UserMetrics:
    """Per-user SE and equal-share SE.

    ``users`` optionally restricts the returned metrics (and the network SE and
    kind counts) to a subset, e.g. the analysis region; loads always count
    every user in the deployment.
    """
    mean_power = mean_received_power(deployment, env, radio)
    power = instantaneous_power(deployment, env, radio, mean_power)
    sinr = compute_sinr(deployment, association, env, radio, power)
    se = np.log2(1.0 + sinr)
    shared = se / association.load[association.serving]
    kind = deployment.node_kind[association.serving]
    if users is not None:
        sinr, se, shared, kind = sinr[users], se[users], shared[users], kind[users]
    return UserMetrics(
        sinr=sinr,
        se=se,
        shared_se=shared,
        serving_kind=kind,
        network_se=float(shared.sum()),
        counts_by_kind=np.bincount(kind, minlength=len(NodeKind)),
    )


def multicast_throughput(typical_rate: float, mean_group_size: float) -> float:
    """Multicast system throughput: mean group size times typical-user rate."""
    if typical_rate < 0 or mean_group_size < 0:
        raise InvalidParameterError("rate and group size must be >= 0")
    return mean_group_size * typical_rate
