import numpy as np
import pytest

from deepverif.exceptions import OutOfDomain
from deepverif.grid.grid_field import GridField
from deepverif.grid.grid_spec import GridSpec
from deepverif.grid.interpolation import (Interp, value_at_point,
                                          values_at_points)


def _affine_field(spec, init_time):
    lats = spec.lat_array[:, None]
    lons = spec.lon_array[None, :]
    return GridField(spec, "t2m", init_time, 0,
                     1.5 + 0.2 * lats - 0.05 * lons)


@pytest.mark.parametrize("lat0, dlat", [(-80.0, 2.5), (80.0, -2.5)])
def test_bilinear_reproduces_affine_fields(init_time, lat0, dlat):
    spec = GridSpec.regular(lat0, dlat, 65, 0.0, 3.0, 120)
    field = _affine_field(spec, init_time)
    rng = np.random.default_rng(11)
    lats = rng.uniform(-80.0, 80.0, 1000)
    lons = rng.uniform(0.0, 357.0, 1000)
    values, inside = values_at_points(field, lats, lons, Interp.BILINEAR)
    assert inside.all()
    expected = 1.5 + 0.2 * lats - 0.05 * lons
    assert np.max(np.abs(values - expected)) <= 1e-12


def test_both_methods_return_stored_values_at_cell_centers(spec,
                                                           init_time):
    rng = np.random.default_rng(0)
    field = GridField(spec, "t2m", init_time, 0, rng.normal(size=spec.shape))
    lat_index, lon_index = np.meshgrid(range(spec.H), range(spec.W),
                                       indexing="ij")
    lats = spec.lat_array[lat_index.ravel()]
    lons = spec.lon_array[lon_index.ravel()]
    for method in Interp:
        values, _ = values_at_points(field, lats, lons, method)
        assert np.array_equal(values, field.values.ravel())


def test_nearest_picks_the_closest_cell(spec, init_time):
    values = np.arange(spec.H * spec.W, dtype=float).reshape(spec.shape)
    field = GridField(spec, "t2m", init_time, 0, values)
    # closest to lat -22.5 (row 1) and lon 90 (column 2)
    assert value_at_point(field, -30.0, 80.0) == values[1, 2]
    # signed longitudes are mapped onto the grid's convention
    assert value_at_point(field, -22.5, -45.0) == values[1, 7]


def test_points_outside_the_grid(spec, init_time):
    field = GridField(spec, "t2m", init_time, 0, np.ones(spec.shape))
    with pytest.raises(OutOfDomain):
        value_at_point(field, -80.0, 0.0)
    with pytest.raises(OutOfDomain):
        value_at_point(field, 0.0, 340.0)
    values, inside = values_at_points(field, [0.0, 0.0], [10.0, 340.0])
    assert inside.tolist() == [True, False]
    assert np.isnan(values[1])


def test_periodic_longitudes_wrap_across_the_seam(spec, init_time):
    values = np.zeros(spec.shape)
    values[:, 7] = 1.0
    field = GridField(spec, "t2m", init_time, 0, values)
    # halfway between lon 315 (column 7) and lon 360 == 0 (column 0)
    assert value_at_point(field, -22.5, 337.5, Interp.BILINEAR,
                          periodic_lon=True) == pytest.approx(0.5)
    assert value_at_point(field, -22.5, 350.0, Interp.NEAREST,
                          periodic_lon=True) == 0.0


def test_interp_parse():
    assert Interp.parse("BILINEAR") is Interp.BILINEAR
    with pytest.raises(ValueError):
        Interp.parse("cubic")


def test_bilinear_on_a_unit_square(init_time):
    spec = GridSpec((0.0, 1.0), (0.0, 1.0))
    field = GridField(spec, "t2m", init_time, 0,
                      np.array([[0.0, 2.0], [4.0, 6.0]]))
    assert value_at_point(field, 0.25, 0.75, Interp.BILINEAR) == \
        pytest.approx(2.5, abs=1e-12)

    ramp = GridField(spec, "t2m", init_time, 0,
                     np.array([[0.0, 0.0], [10.0, 10.0]]))
    assert value_at_point(ramp, 0.5, 0.5, Interp.BILINEAR) == \
        pytest.approx(5.0, abs=1e-12)
