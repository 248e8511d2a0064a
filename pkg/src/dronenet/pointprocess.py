"""Homogeneous Poisson point processes on a disk with per-trial substreams.

Every random draw in a simulation goes through a :class:`RandomStream`,
identified by ``(master_seed, trial_index, label)``.  The triple is hashed
into a :class:`numpy.random.SeedSequence` spawn key, so a given stream always
replays the same values and streams with different labels are independent.
"""
from __future__ import annotations

import zlib
from dataclasses import dataclass
from typing import Optional, Union

import numpy as np

from .errors import InvalidParameterError

DEFAULT_RADIUS = 2000.0


@dataclass(frozen=True)
class Region:
    """Outer simulation disk plus the inner disk where typical users live."""

    radius: float = DEFAULT_RADIUS
    analysis_radius: Optional[float] = None

    def __post_init__(self):
        if not self.radius > 0:
            raise InvalidParameterError(f"radius must be > 0, got {self.radius}")
        if self.analysis_radius is None:
            object.__setattr__(self, "analysis_radius", self.radius / 2)
        if not 0 < self.analysis_radius <= self.radius:
            raise InvalidParameterError(
                f"analysis_radius must lie in (0, {self.radius}], got {self.analysis_radius}"
            )

    @property
    def area(self) -> float:
        return np.pi * self.radius**2


@dataclass(frozen=True)
class RandomStream:
    master_seed: int
    trial_index: int
    label: str

    def __post_init__(self):
        if self.trial_index < 0:
            raise InvalidParameterError(f"trial_index must be >= 0, got {self.trial_index}")

    def generator(self) -> np.random.Generator:
        """Fresh generator positioned at the start of this stream."""
        key = (int(self.trial_index), zlib.crc32(self.label.encode("utf-8")))
        seq = np.random.SeedSequence(entropy=int(self.master_seed) % 2**64, spawn_key=key)
        return np.random.Generator(np.random.PCG64(seq))


StreamLike = Union[RandomStream, np.random.Generator]


def as_generator(stream: StreamLike) -> np.random.Generator:
    if isinstance(stream, np.random.Generator):
        return stream
    return stream.generator()


def sample_uniform_disk(count: int, radius: float, stream: StreamLike) -> np.ndarray:
    """Draw exactly ``count`` i.i.d. uniform points on a centred disk.

    Radius is sampled by inverse CDF (``radius * sqrt(U)``), never by rejection.
    Returns an array of shape ``(count, 2)``.
    """
    if count < 0 or int(count) != count:
        raise InvalidParameterError(f"count must be a non-negative integer, got {count}")
    if not radius > 0:
        raise InvalidParameterError(f"radius must be > 0, got {radius}")
    rng = as_generator(stream)
    count = int(count)
    u = rng.random((count, 2))
    rho = radius * np.sqrt(u[:, 0])
    phi = 2.0 * np.pi * u[:, 1]
    pts = np.empty((count, 2))
    pts[:, 0] = rho * np.cos(phi)
    pts[:, 1] = rho * np.sin(phi)
    # cos/sin rounding can push |p| a hair past the boundary
    norm = np.hypot(pts[:, 0], pts[:, 1])
    over = norm > radius
    if over.any():
        pts[over] *= (radius / norm[over])[:, None]
    return pts


def sample_ppp(expected_count: float, region: Region, stream: StreamLike) -> np.ndarray:
    """Homogeneous PPP on the outer disk of ``region``.

    ``expected_count`` is the mean number of points in the whole disk, not a
    per-area density.
    """
    if not expected_count >= 0:
        raise InvalidParameterError(f"expected_count must be >= 0, got {expected_count}")
    rng = as_generator(stream)
    n = rng.poisson(expected_count)
    return sample_uniform_disk(n, region.radius, rng)
