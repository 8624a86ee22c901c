from dataclasses import dataclass

import numpy as np

from deepverif.exceptions import FormatError, SpecMismatch

# Absolute tolerance used when deciding that a coordinate axis is regular.
REGULAR_ATOL = 1e-9


def _strictly_monotonic(values):
    if len(values) < 2:
        return True
    steps = np.diff(values)
    return bool(np.all(steps > 0) or np.all(steps < 0))


@dataclass(frozen=True)
class GridSpec:
    """
    A regular latitude/longitude grid.

    Latitudes may run north to south or south to north, longitudes either
    in the [0, 360) or in the [-180, 180) convention. The spec is hashable
    and compares by value, so two fields live on the same grid exactly when
    their specs are equal.

    :param lats: latitudes in degrees, strictly monotonic, within [-90, 90]
    :param lons: longitudes in degrees, strictly monotonic
    """
    lats: tuple
    lons: tuple

    def __post_init__(self):
        lats = tuple(float(lat) for lat in np.ravel(self.lats))
        lons = tuple(float(lon) for lon in np.ravel(self.lons))
        object.__setattr__(self, "lats", lats)
        object.__setattr__(self, "lons", lons)

        if not lats or not lons:
            raise SpecMismatch("a grid needs at least one latitude and one "
                               "longitude")
        if not (np.all(np.isfinite(lats)) and np.all(np.isfinite(lons))):
            raise SpecMismatch("grid coordinates must be finite")
        if min(lats) < -90.0 or max(lats) > 90.0:
            raise SpecMismatch("latitudes must lie within [-90, 90]")
        signed = -180.0 <= min(lons) and max(lons) < 180.0
        unsigned = 0.0 <= min(lons) and max(lons) < 360.0
        if not (signed or unsigned):
            raise SpecMismatch(
                "longitudes must lie within [0, 360) or [-180, 180)")
        if not _strictly_monotonic(lats):
            raise SpecMismatch("latitudes must be strictly monotonic")
        if not _strictly_monotonic(lons):
            raise SpecMismatch("longitudes must be strictly monotonic")

    @classmethod
    def regular(cls, lat0, dlat, n_lat, lon0, dlon, n_lon):
        """
        Builds a spec from its first coordinate and step along each axis.

        :param lat0: first latitude in degrees
        :param dlat: latitude step, negative for north-to-south grids
        :param n_lat: number of latitudes (H)
        :param lon0: first longitude in degrees
        :param dlon: longitude step
        :param n_lon: number of longitudes (W)
        :return: GridSpec
        """
        lats = lat0 + dlat * np.arange(int(n_lat), dtype=np.float64)
        lons = lon0 + dlon * np.arange(int(n_lon), dtype=np.float64)
        # absorb rounding at the poles, e.g. 90 - 0.25 * 720
        lats = np.where(np.abs(np.abs(lats) - 90.0) < REGULAR_ATOL,
                        np.sign(lats) * 90.0, lats)
        return cls(tuple(lats), tuple(lons))

    @property
    def H(self):
        return len(self.lats)

    @property
    def W(self):
        return len(self.lons)

    @property
    def shape(self):
        return self.H, self.W

    @property
    def lat_array(self):
        return np.asarray(self.lats, dtype=np.float64)

    @property
    def lon_array(self):
        return np.asarray(self.lons, dtype=np.float64)

    @property
    def signed_lons(self):
        """
        True when the grid uses the [-180, 180) longitude convention.
        """
        return min(self.lons) < 0.0

    def normalize_lon(self, lon):
        """
        Maps a longitude (scalar or array) to this grid's convention.

        Values already inside the convention are returned untouched so that
        no rounding is introduced.
        """
        lon = np.asarray(lon, dtype=np.float64)
        if self.signed_lons:
            outside = (lon < -180.0) | (lon >= 180.0)
            wrapped = np.mod(lon + 180.0, 360.0) - 180.0
        else:
            outside = (lon < 0.0) | (lon >= 360.0)
            wrapped = np.mod(lon, 360.0)
        return np.where(outside, wrapped, lon)

    def regular_params(self):
        """
        Returns (lat0, dlat, lon0, dlon) of a regular grid.

        A single-point axis has step 0.

        :raises FormatError: when either axis is not evenly spaced
        """
        def axis_params(values):
            values = np.asarray(values, dtype=np.float64)
            if values.size == 1:
                return float(values[0]), 0.0
            step = (values[-1] - values[0]) / (values.size - 1)
            expected = values[0] + step * np.arange(values.size)
            if not np.allclose(values, expected, rtol=0.0,
                               atol=REGULAR_ATOL):
                raise FormatError("grid axis is not evenly spaced")
            return float(values[0]), float(step)

        lat0, dlat = axis_params(self.lats)
        lon0, dlon = axis_params(self.lons)
        return lat0, dlat, lon0, dlon
