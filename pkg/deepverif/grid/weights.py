import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from deepverif.exceptions import DegenerateGrid, SpecMismatch


class WeightMode(Enum):
    """
    MEAN_ONE weights average to one over the latitude rows and scale the
    training objective. SUM_ONE weights are per-cell and total one over the
    whole grid, so a weighted sum is a weighted average.
    """
    MEAN_ONE = "mean_one"
    SUM_ONE = "sum_one"


@dataclass(frozen=True, eq=False)
class LatWeights:
    """
    Latitude weights of one grid.

    :param mode: WeightMode used for normalization
    :param values: one weight per latitude row (H values)
    :param n_lon: number of longitudes (W) of the grid they were built for
    """
    mode: WeightMode
    values: np.ndarray
    n_lon: int

    def __post_init__(self):
        values = np.array(self.values, dtype=np.float64, copy=True).ravel()
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    @property
    def H(self):
        return self.values.size

    def cell_weights(self):
        """H x W array of the weights broadcast along longitude."""
        return np.repeat(self.values[:, None], self.n_lon, axis=1)

    def check(self, spec, mode=None):
        """
        Raises SpecMismatch unless these weights fit spec (and mode).
        """
        if self.H != spec.H or self.n_lon != spec.W:
            raise SpecMismatch("weights for a {}x{} grid used on {}x{}".format(
                self.H, self.n_lon, spec.H, spec.W))
        if mode is not None and self.mode is not mode:
            raise SpecMismatch("expected {} weights, got {}".format(
                mode.name, self.mode.name))


def cos_lat(spec):
    """
    cos(lat) per latitude row, exactly zero at the poles.
    """
    lats = spec.lat_array
    cosines = np.cos(np.deg2rad(lats))
    return np.where(np.abs(lats) == 90.0, 0.0, cosines)


def lat_weights(spec, mode=WeightMode.MEAN_ONE):
    """
    Cosine-of-latitude weights.

    MEAN_ONE returns cos(lat_i) / mean(cos(lat)), whose average over the H
    rows is one. SUM_ONE returns cos(lat_i) / (W * sum(cos(lat))), whose
    total over all H x W cells is one.

    :param spec: GridSpec
    :param mode: WeightMode
    :return: LatWeights
    :raises DegenerateGrid: when every row sits on a pole
    """
    cosines = cos_lat(spec)
    total = math.fsum(cosines.tolist())
    if total <= 0.0:
        raise DegenerateGrid("all latitude rows have zero cosine weight")
    if mode is WeightMode.MEAN_ONE:
        values = cosines / (total / spec.H)
    elif mode is WeightMode.SUM_ONE:
        values = cosines / (total * spec.W)
    else:
        raise ValueError("unknown weight mode {!r}".format(mode))
    return LatWeights(mode, values, spec.W)


def uniform_weights(spec, mode=WeightMode.SUM_ONE):
    """
    Equal weights for every cell, in the same normalizations as
    lat_weights. Used for point-style evaluation on a grid.
    """
    if mode is WeightMode.MEAN_ONE:
        values = np.ones(spec.H)
    else:
        values = np.full(spec.H, 1.0 / (spec.H * spec.W))
    return LatWeights(mode, values, spec.W)
