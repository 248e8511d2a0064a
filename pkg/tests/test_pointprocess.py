import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from dronenet.errors import InvalidParameterError
from dronenet.pointprocess import RandomStream, Region, sample_ppp, sample_uniform_disk


def stream(label="bs", trial=0, seed=7):
    return RandomStream(seed, trial, label)


def test_region_defaults_and_validation():
    r = Region(2000.0)
    assert r.analysis_radius == 1000.0
    with pytest.raises(InvalidParameterError):
        Region(0.0)
    with pytest.raises(InvalidParameterError):
        Region(100.0, 150.0)


def test_zero_intensity_is_empty():
    pts = sample_ppp(0.0, Region(), stream())
    assert pts.shape == (0, 2)


def test_negative_intensity_rejected():
    with pytest.raises(InvalidParameterError):
        sample_ppp(-1.0, Region(), stream())


def test_poisson_moments():
    region = Region(2000.0)
    counts = np.array([len(sample_ppp(20.0, region, stream(trial=t))) for t in range(10_000)])
    assert 19.7 <= counts.mean() <= 20.3
    assert 0.9 <= counts.var(ddof=1) / counts.mean() <= 1.1


@settings(max_examples=50, deadline=None)
@given(
    lam=st.floats(0, 200),
    radius=st.floats(1e-3, 1e5),
    seed=st.integers(0, 2**63),
    trial=st.integers(0, 10**6),
)
def test_points_inside_disk(lam, radius, seed, trial):
    pts = sample_ppp(lam, Region(radius), RandomStream(seed, trial, "x"))
    assert np.all(pts[:, 0] ** 2 + pts[:, 1] ** 2 <= radius**2)


def test_uniform_disk_cardinality():
    assert sample_uniform_disk(0, 1.0, stream()).shape == (0, 2)
    assert len(sample_uniform_disk(5, 1.0, stream())) == 5


def test_uniform_disk_mean_radius():
    # E|P| = 2/3 on the unit disk
    pts = sample_uniform_disk(100_000, 1.0, stream("users"))
    assert 0.664 <= np.hypot(pts[:, 0], pts[:, 1]).mean() <= 0.669


@pytest.mark.parametrize("rho", [0.1, 0.3, 0.5, 0.8])
def test_uniform_disk_subdisk_fraction(rho):
    n = 200_000
    pts = sample_uniform_disk(n, 1.0, stream("users"))
    frac = np.mean(np.hypot(pts[:, 0], pts[:, 1]) <= rho)
    p = rho**2
    assert abs(frac - p) <= 3 * np.sqrt(p * (1 - p) / n)


def test_uniform_disk_validation():
    with pytest.raises(InvalidParameterError):
        sample_uniform_disk(-1, 1.0, stream())
    with pytest.raises(InvalidParameterError):
        sample_uniform_disk(3, 0.0, stream())


def test_determinism_and_substreams():
    region = Region()
    a = sample_ppp(50, region, stream("bs", 3))
    b = sample_ppp(50, region, stream("bs", 3))
    assert np.array_equal(a, b)
    c = sample_ppp(50, region, stream("users", 3))
    d = sample_ppp(50, region, stream("bs", 4))
    assert len(a) != len(c) or not np.allclose(a, c)
    assert len(a) != len(d) or not np.allclose(a, d)


def test_substreams_uncorrelated():
    u = stream("a").generator().random(50_000)
    v = stream("b").generator().random(50_000)
    assert abs(np.corrcoef(u, v)[0, 1]) < 4 / np.sqrt(50_000)
