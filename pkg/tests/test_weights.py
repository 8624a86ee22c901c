import math

import numpy as np
import pytest

from deepverif.exceptions import DegenerateGrid, SpecMismatch
from deepverif.grid.grid_spec import GridSpec
from deepverif.grid.weights import (WeightMode, cos_lat, lat_weights,
                                    uniform_weights)


def _random_spec(rng):
    n_lat = int(rng.integers(1, 40))
    n_lon = int(rng.integers(1, 64))
    if rng.random() < 0.3:
        # pole-to-pole grid
        lats = np.linspace(90.0, -90.0, max(n_lat, 3))
    else:
        top = rng.uniform(80.0, 89.999999)
        bottom = rng.uniform(-89.999999, top - 1e-3)
        lats = np.linspace(bottom, top, n_lat) if n_lat > 1 else [top]
    lons = np.arange(n_lon) * (360.0 / n_lon)
    return GridSpec(tuple(lats), tuple(lons))


def test_weights_are_normalized_on_random_grids():
    rng = np.random.default_rng(3)
    for _ in range(100):
        spec = _random_spec(rng)
        mean_one = lat_weights(spec, WeightMode.MEAN_ONE)
        sum_one = lat_weights(spec, WeightMode.SUM_ONE)
        assert math.fsum(mean_one.values) / spec.H == pytest.approx(
            1.0, abs=1e-12)
        assert math.fsum(sum_one.cell_weights().ravel()) == pytest.approx(
            1.0, abs=1e-12)
        assert np.all(mean_one.values >= 0.0)


def test_poles_get_zero_weight():
    spec = GridSpec.regular(90.0, -45.0, 5, 0.0, 90.0, 4)
    assert cos_lat(spec)[0] == 0.0
    assert cos_lat(spec)[-1] == 0.0
    weights = lat_weights(spec, WeightMode.SUM_ONE)
    assert weights.values[0] == 0.0


def test_pole_only_grid_is_degenerate():
    spec = GridSpec((-90.0, 90.0), (0.0, 180.0))
    with pytest.raises(DegenerateGrid):
        lat_weights(spec)


def test_check_rejects_foreign_grids_and_modes(spec):
    weights = lat_weights(spec, WeightMode.SUM_ONE)
    weights.check(spec, WeightMode.SUM_ONE)
    with pytest.raises(SpecMismatch):
        weights.check(spec, WeightMode.MEAN_ONE)
    with pytest.raises(SpecMismatch):
        weights.check(GridSpec.regular(0.0, 1.0, 2, 0.0, 1.0, 2))


def test_uniform_weights(spec):
    weights = uniform_weights(spec)
    assert weights.cell_weights().sum() == pytest.approx(1.0)
    assert np.all(uniform_weights(spec, WeightMode.MEAN_ONE).values == 1.0)


def test_equator_and_sixty_degrees():
    spec = GridSpec((0.0, 60.0), (0.0,))
    mean_one = lat_weights(spec, WeightMode.MEAN_ONE)
    assert mean_one.values.tolist() == pytest.approx([4.0 / 3.0, 2.0 / 3.0])
    sum_one = lat_weights(spec, WeightMode.SUM_ONE)
    assert sum_one.cell_weights().ravel().tolist() == pytest.approx(
        [2.0 / 3.0, 1.0 / 3.0])


def test_single_latitude_weighs_one():
    spec = GridSpec((0.0,), (0.0, 90.0, 180.0))
    assert lat_weights(spec, WeightMode.MEAN_ONE).values.tolist() == [1.0]
