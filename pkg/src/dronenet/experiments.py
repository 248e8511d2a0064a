"""Monte Carlo runner, parameter sweeps and grid-argmax optimisation.

Every grid point of a sweep reuses trial indices ``0..trials-1`` under the same
master seed, so point processes that do not depend on the swept parameter are
identical across the grid (common random numbers).
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Callable, Dict, List, Optional, Sequence

import numpy as np

from .channel import get_environment
from .errors import InvalidParameterError
from .network import (
    DeploymentSpec,
    NodeKind,
    associate,
    build_deployment,
    compute_metrics,
)

DEFAULT_TRIALS = 2000
Z95 = 1.959963984540054

SMALL_FRACTION_GRID = tuple(round(0.1 * i, 1) for i in range(11))
ALTITUDE_GRID = tuple(float(h) for h in range(50, 1001, 50))
LOAD_RATIO_GRID = (0.5, 1.0, 2.0, 4.0, 8.0, 16.0)

METRICS = ("typical-se", "shared-se", "network-se")


@dataclass(frozen=True)
class TrialResult:
    trial_index: int
    n_users: int
    mean_typical_se: float
    mean_shared_se: float
    network_se: float
    counts_by_kind: tuple
    mean_load_by_kind: tuple
    empty: bool = False

    def metric(self, name: str) -> float:
        if name == "typical-se":
            return self.mean_typical_se
        if name == "shared-se":
            return self.mean_shared_se
        if name == "network-se":
            return self.network_se
        raise InvalidParameterError(f"unknown metric {name!r}; choose from {METRICS}")


def _empty_trial(trial_index: int) -> TrialResult:
    zeros = (0,) * len(NodeKind)
    return TrialResult(trial_index, 0, 0.0, 0.0, 0.0, zeros, (0.0,) * len(NodeKind), empty=True)


def run_trial(spec: DeploymentSpec, master_seed: int, trial_index: int) -> TrialResult:
    """One realization, scored over users inside the analysis disk.

    Trials with no analysis-region users, or with no node at all to serve
    them, come back with ``empty=True``.
    """
    deployment = build_deployment(spec, master_seed, trial_index)
    inner = np.hypot(deployment.users[:, 0], deployment.users[:, 1]) <= spec.region.analysis_radius
    if not inner.any() or deployment.n_nodes == 0:
        return _empty_trial(trial_index)

    env, radio = spec.env, spec.radio
    association = associate(deployment, env, radio)
    metrics = compute_metrics(deployment, association, env, radio, users=inner)

    load_by_kind = []
    for kind in NodeKind:
        on = association.active & (deployment.node_kind == kind)
        load_by_kind.append(float(association.load[on].mean()) if on.any() else 0.0)

    return TrialResult(
        trial_index=trial_index,
        n_users=int(inner.sum()),
        mean_typical_se=float(metrics.se.mean()),
        mean_shared_se=float(metrics.shared_se.mean()),
        network_se=metrics.network_se,
        counts_by_kind=tuple(int(c) for c in metrics.counts_by_kind),
        mean_load_by_kind=tuple(load_by_kind),
    )


def run_trials(spec: DeploymentSpec, trials: int, master_seed: int,
               n_jobs: int = 1) -> List[TrialResult]:
    """Trials ``0..trials-1``, always returned in index order."""
    if trials < 1:
        raise InvalidParameterError(f"trials must be >= 1, got {trials}")
    if n_jobs <= 1:
        return [run_trial(spec, master_seed, t) for t in range(trials)]
    with ThreadPoolExecutor(max_workers=n_jobs) as pool:
        return list(pool.map(lambda t: run_trial(spec, master_seed, t), range(trials)))


@dataclass(frozen=True)
class Estimate:
    mean: float
    stderr: float
    ci95_low: float
    ci95_high: float
    trials: int

    def overlaps(self, other: "Estimate") -> bool:
        return not (self.ci95_high < other.ci95_low or other.ci95_high < self.ci95_low)


def estimate(samples: Sequence[float]) -> Estimate:
    """Sample mean with a normal-approximation 95% interval."""
    x = np.asarray(samples, dtype=float)
    n = len(x)
    if n < 2:
        raise InvalidParameterError(f"need at least 2 samples for an interval, got {n}")
    mean = float(x.mean())
    se = float(x.std(ddof=1) / math.sqrt(n))
    return Estimate(mean, se, mean - Z95 * se, mean + Z95 * se, n)


@dataclass(frozen=True)
class SweepPoint:
    value: float
    estimate: Estimate
    samples: np.ndarray  # metric per non-empty trial, by trial index
    empty_trials: int
    mean_counts: tuple  # mean analysis-region users per NodeKind
    mean_users: float
    count_samples: np.ndarray = field(repr=False, default=None)  # (trials, len(NodeKind))
    mean_load: tuple = ()


@dataclass(frozen=True)
class SweepResult:
    parameter_name: str
    metric: str
    points: List[SweepPoint]

    @property
    def grid_values(self) -> np.ndarray:
        return np.array([p.value for p in self.points])

    @property
    def means(self) -> np.ndarray:
        return np.array([p.estimate.mean for p in self.points])

    def __len__(self):
        return len(self.points)


@dataclass(frozen=True)
class OptimumReport:
    argmax_value: float
    argmax_index: int
    max_metric: float
    ci_at_argmax: tuple
    separated: bool


def _summarize(value: float, results: List[TrialResult], metric: str) -> SweepPoint:
    kept = [r for r in results if not r.empty]
    if len(kept) < 2:
        raise RuntimeError(
            f"only {len(kept)} of {len(results)} trials at {value:g} had analysis-region "
            "users; raise the trial count or the user intensity"
        )
    samples = np.array([r.metric(metric) for r in kept])
    counts = np.array([r.counts_by_kind for r in kept], dtype=float).reshape(-1, len(NodeKind))
    loads = np.array([r.mean_load_by_kind for r in kept], dtype=float).reshape(-1, len(NodeKind))
    return SweepPoint(
        value=float(value),
        estimate=estimate(samples),
        samples=samples,
        empty_trials=len(results) - len(kept),
        mean_counts=tuple(float(c) for c in counts.mean(axis=0)),
        mean_users=float(np.mean([r.n_users for r in kept])),
        count_samples=counts,
        mean_load=tuple(float(v) for v in loads.mean(axis=0)),
    )


def _set_small_fraction(spec, value):
    return spec.with_(small_fraction=float(value))


def _set_small_altitude(spec, value):
    return spec.with_(radio=replace(spec.radio, altitude_small=float(value)))


def _set_load_ratio(spec, value):
    if value < 0:
        raise InvalidParameterError(f"load ratio must be >= 0, got {value}")
    return spec.with_(lambda_users=float(value) * spec.lambda_terrestrial)


SETTERS: Dict[str, Callable[[DeploymentSpec, float], DeploymentSpec]] = {
    "small_fraction": _set_small_fraction,
    "altitude_small": _set_small_altitude,
    "load_ratio": _set_load_ratio,
}


def sweep(base_spec: DeploymentSpec, parameter: str, grid: Sequence[float], trials: int,
          master_seed: int, metric: str = "typical-se", n_jobs: int = 1) -> SweepResult:
    if parameter not in SETTERS:
        raise InvalidParameterError(f"cannot sweep {parameter!r}; choose from {sorted(SETTERS)}")
    if metric not in METRICS:
        raise InvalidParameterError(f"unknown metric {metric!r}; choose from {METRICS}")
    if len(grid) == 0:
        raise InvalidParameterError("sweep grid is empty")
    if trials < 2:
        raise InvalidParameterError(f"trials must be >= 2, got {trials}")
    specs = [SETTERS[parameter](base_spec, v) for v in grid]
    points = [
        _summarize(v, run_trials(s, trials, master_seed, n_jobs), metric)
        for v, s in zip(grid, specs)
    ]
    return SweepResult(parameter, metric, points)


def sweep_small_fraction(base_spec, grid=SMALL_FRACTION_GRID, trials=DEFAULT_TRIALS,
                         master_seed=0, n_jobs=1):
    if any(not 0 <= p <= 1 for p in grid):
        raise InvalidParameterError("small-drone fractions must lie in [0, 1]")
    return sweep(base_spec, "small_fraction", grid, trials, master_seed, "typical-se", n_jobs)


def sweep_small_altitude(base_spec, grid=ALTITUDE_GRID, trials=DEFAULT_TRIALS,
                         master_seed=0, n_jobs=1):
    return sweep(base_spec, "altitude_small", grid, trials, master_seed, "typical-se", n_jobs)


def sweep_load_ratio(base_spec, grid=LOAD_RATIO_GRID, trials=DEFAULT_TRIALS, master_seed=0,
                     with_drones=True, n_jobs=1):
    spec = base_spec.with_(drones_enabled=with_drones)
    return sweep(spec, "load_ratio", grid, trials, master_seed, "network-se", n_jobs)


def find_optimum(result: SweepResult) -> OptimumReport:
    """Grid argmax (lowest index on ties) and whether its CI clears both endpoints."""
    if len(result) == 0:
        raise InvalidParameterError("empty sweep")
    means = result.means
    i = int(np.argmax(means))
    best = result.points[i].estimate
    separated = (
        0 < i < len(result) - 1
        and not best.overlaps(result.points[0].estimate)
        and not best.overlaps(result.points[-1].estimate)
    )
    return OptimumReport(
        argmax_value=result.points[i].value,
        argmax_index=i,
        max_metric=best.mean,
        ci_at_argmax=(best.ci95_low, best.ci95_high),
        separated=bool(separated),
    )


def improvement_over_endpoints(result: SweepResult) -> tuple:
    """Percent gain of the grid optimum over the first and last grid points."""
    best = result.means.max()
    first, last = result.means[0], result.means[-1]
    return 100.0 * (best / first - 1.0), 100.0 * (best / last - 1.0)


def load_benefit_threshold(with_drones: SweepResult, without: SweepResult) -> Optional[float]:
    """Smallest grid ratio from which drones win with disjoint CIs at every larger ratio.

    Returns ``None`` when even the last grid point is not a clear win.
    """
    wins = [
        a.estimate.ci95_low > b.estimate.ci95_high
        for a, b in zip(with_drones.points, without.points)
    ]
    threshold = None
    for i in range(len(wins) - 1, -1, -1):
        if not wins[i]:
            break
        threshold = with_drones.points[i].value
    return threshold


def drone_fraction(point: SweepPoint) -> Estimate:
    """Fraction of analysis-region users served by either drone tier."""
    counts = point.count_samples
    totals = counts.sum(axis=1)
    frac = (counts[:, NodeKind.BIG_DRONE] + counts[:, NodeKind.SMALL_DRONE]) / totals
    return estimate(frac)


# Figure presets.  Figures 2 and 3 are drone-only networks; p = 0.9 is the
# dense-urban optimum of the proportion sweep and is reused for 3 and 4.
FIGURE_SMALL_FRACTION = 0.9
FIGURE_USERS = 200.0


def figure2_spec(env_name: str = "dense-urban", **overrides) -> DeploymentSpec:
    spec = DeploymentSpec(
        lambda_terrestrial=0.0,
        lambda_users=FIGURE_USERS,
        env=get_environment(env_name),
    )
    return spec.with_(**overrides)


def figure3_spec(env_name: str = "dense-urban", **overrides) -> DeploymentSpec:
    return figure2_spec(env_name, small_fraction=FIGURE_SMALL_FRACTION).with_(**overrides)


def figure4_spec(lambda_terrestrial: float = 20.0, env_name: str = "dense-urban",
                 **overrides) -> DeploymentSpec:
    spec = DeploymentSpec(
        lambda_terrestrial=lambda_terrestrial,
        lambda_users=lambda_terrestrial,
        small_fraction=FIGURE_SMALL_FRACTION,
        env=get_environment(env_name),
    )
    return spec.with_(**overrides)
