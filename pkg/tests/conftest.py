import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from dronenet.channel import ENVIRONMENTS, RadioConfig  # noqa: E402
from dronenet.network import Deployment, NodeKind  # noqa: E402


def make_deployment(kinds, node_xy, users, radio=RadioConfig(), fades=None):
    """Hand-built deployment; ``kinds`` must list terrestrial nodes first."""
    kinds = np.asarray(kinds, dtype=int)
    altitude = np.array([0.0, radio.altitude_big, radio.altitude_small])[kinds]
    power = np.array([radio.tx_power_terrestrial, radio.tx_power_big, radio.tx_power_small])[kinds]
    users = np.asarray(users, dtype=float).reshape(-1, 2)
    n_t = int(np.count_nonzero(kinds == NodeKind.TERRESTRIAL))
    if fades is None:
        fades = np.ones((len(users), n_t))
    return Deployment(
        node_xy=np.asarray(node_xy, dtype=float).reshape(-1, 2),
        node_kind=kinds,
        node_altitude=altitude,
        node_power=power,
        users=users,
        fades=np.asarray(fades, dtype=float).reshape(len(users), n_t),
    )


def random_instance(rng, radio=RadioConfig(), max_nodes=20, max_users=20, radius=2000.0):
    n = rng.integers(1, max_nodes + 1)
    kinds = np.sort(rng.integers(0, 3, n))
    nodes = rng.uniform(-radius, radius, (n, 2))
    users = rng.uniform(-radius, radius, (rng.integers(1, max_users + 1), 2))
    n_t = int(np.count_nonzero(kinds == 0))
    fades = rng.exponential(1.0, (len(users), n_t))
    return make_deployment(kinds, nodes, users, radio, fades)


@pytest.fixture
def dense():
    return ENVIRONMENTS["dense-urban"]


@pytest.fixture
def radio():
    return RadioConfig()


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    verdicts = getattr(mod, "VERDICTS", None)
    if verdicts:
        terminalreporter.section("acceptance criteria")
        for line in verdicts:
            terminalreporter.write_line(line)
