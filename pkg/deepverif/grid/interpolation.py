from enum import Enum

import numpy as np

from deepverif.exceptions import OutOfDomain


class Interp(Enum):
    """How a gridded field is sampled at a point."""
    NEAREST = "nearest"
    BILINEAR = "bilinear"

    @classmethod
    def parse(cls, value):
        if isinstance(value, cls):
            return value
        return cls(str(value).lower())


def _bracket(axis, query, periodic=False):
    """
    Locates queries on a monotonic axis.

    :return: (lower index, upper index, fraction, inside mask); the value at
        a query is (1 - fraction) * v[lower] + fraction * v[upper]
    """
    axis = np.asarray(axis, dtype=np.float64)
    n = axis.size
    descending = n > 1 and axis[1] < axis[0]
    ascending_axis = axis[::-1] if descending else axis

    if n == 1:
        inside = query == axis[0]
        zeros = np.zeros(query.shape, dtype=np.intp)
        return zeros, zeros, np.zeros(query.shape), inside

    if periodic:
        start = ascending_axis[0]
        query = start + np.mod(query - start, 360.0)
        extended = np.append(ascending_axis, start + 360.0)
        inside = np.ones(query.shape, dtype=bool)
    else:
        extended = ascending_axis
        inside = (query >= ascending_axis[0]) & (query <= ascending_axis[-1])

    last = extended.size - 2
    lower = np.clip(np.searchsorted(extended, query, side="right") - 1,
                    0, last)
    upper = lower + 1
    fraction = (query - extended[lower]) / (extended[upper] - extended[lower])
    fraction = np.where(inside, fraction, 0.0)
    # the seam cell of a periodic axis wraps back to the first column
    upper = np.where(upper == n, 0, upper)

    if descending:
        lower, upper = n - 1 - lower, n - 1 - upper
    return lower, upper, fraction, inside


def values_at_points(field, lats, lons, method=Interp.NEAREST,
                     periodic_lon=False):
    """
    Samples a GridField at many points at once.

    NEAREST picks the closest latitude and the closest longitude
    independently; BILINEAR blends the four surrounding cell centers. Both
    return the stored value at a cell center.

    :param field: GridField
    :param lats: latitudes in degrees
    :param lons: longitudes in degrees, any convention
    :param method: Interp
    :param periodic_lon: wrap across the longitude seam
    :return: (values, inside) arrays; values are NaN where inside is False
    """
    method = Interp.parse(method)
    spec = field.spec
    lats = np.atleast_1d(np.asarray(lats, dtype=np.float64))
    lons = spec.normalize_lon(np.atleast_1d(np.asarray(lons,
                                                       dtype=np.float64)))

    i0, i1, ty, inside_lat = _bracket(spec.lats, lats)
    j0, j1, tx, inside_lon = _bracket(spec.lons, lons, periodic=periodic_lon)
    inside = inside_lat & inside_lon
    grid = field.values

    if method is Interp.NEAREST:
        row = np.where(ty > 0.5, i1, i0)
        col = np.where(tx > 0.5, j1, j0)
        values = grid[row, col]
    else:
        bottom = (1.0 - tx) * grid[i0, j0] + tx * grid[i0, j1]
        top = (1.0 - tx) * grid[i1, j0] + tx * grid[i1, j1]
        values = (1.0 - ty) * bottom + ty * top

    return np.where(inside, values, np.nan), inside


def value_at_point(field, lat, lon, method=Interp.NEAREST,
                   periodic_lon=False):
    """
    Samples a GridField at one point.

    :raises OutOfDomain: when the point lies outside the grid
    :return: float
    """
    values, inside = values_at_points(field, [lat], [lon], method,
                                      periodic_lon)
    if not inside[0]:
        raise OutOfDomain("point ({}, {}) lies outside the grid".format(
            lat, lon))
    return float(values[0])
