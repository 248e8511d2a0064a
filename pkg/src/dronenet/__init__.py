"""Monte Carlo spectral-efficiency simulator for multi-tier drone networks."""
from .channel import (
    ENVIRONMENTS,
    Environment,
    RadioConfig,
    atg_gain_linear,
    atg_pathloss_db,
    fspl_db,
    get_environment,
    los_probability,
    nlos_probability,
    sample_fade,
    terrestrial_gain,
)
from .errors import ConfigError, InvalidParameterError
from .network import (
    Association,
    Deployment,
    DeploymentSpec,
    NodeKind,
    UserMetrics,
    associate,
    build_deployment,
    compute_metrics,
    compute_sinr,
    mean_received_power,
    multicast_throughput,
)
from .pointprocess import RandomStream, Region, sample_ppp, sample_uniform_disk

__version__ = "0.1.0"
