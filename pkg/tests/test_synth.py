import numpy as np
import pytest

from routeseq.data import zone_property_stats
from routeseq.synth import SECONDS_PER_DEGREE, generate_synthetic_dataset


def test_deterministic():
    a = generate_synthetic_dataset(3, seed=7)
    b = generate_synthetic_dataset(3, seed=7)
    for x, y in zip(a, b):
        assert x.stop_ids == y.stop_ids
        assert np.array_equal(x.travel_time, y.travel_time)
        assert x.actual_sequence == y.actual_sequence
    c = generate_synthetic_dataset(3, seed=8)
    assert not np.array_equal(a[0].travel_time, c[0].travel_time) or a[0].stop_ids != c[0].stop_ids


def test_noise_free_times_are_euclidean():
    b = generate_synthetic_dataset(1, noise=0.0, seed=3)[0]
    c = np.array([(b.stops[s].latitude, b.stops[s].longitude) for s in b.stop_ids])
    d = np.hypot(c[:, None, 0] - c[None, :, 0], c[:, None, 1] - c[None, :, 1])
    assert np.allclose(b.travel_time, d * SECONDS_PER_DEGREE)


def test_shape_and_labels():
    bundles = generate_synthetic_dataset(20, zones_per_route=(5, 6), stops_per_zone=(2, 3), seed=1)
    for b in bundles:
        assert 5 <= len(b.zones()) <= 6
        assert b.actual_sequence[0] == b.station_id
        sizes = [len(v) for v in b.zone_members().values()]
        assert min(sizes) >= 2 and max(sizes) <= 3


def test_planted_zone_properties():
    stats = zone_property_stats(generate_synthetic_dataset(100, seed=7))
    assert stats.same_major_fraction >= 0.8
    assert stats.inner_diff_one_fraction == 1.0
    assert stats.major_diff_one_fraction == 1.0


@pytest.mark.parametrize(
    "kw", [{"n_routes": 0}, {"n_routes": 1, "noise": -0.1}, {"n_routes": 1, "zones_per_route": (3, 2)}]
)
def test_invalid(kw):
    with pytest.raises(ValueError):
        generate_synthetic_dataset(**kw)
