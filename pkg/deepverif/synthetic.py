"""
Desk-scale synthetic truth.

Anomalies around a fixed climatology relax with an e-folding time of `tau`
hours and are advected one cell eastward every `shift_every` hours, while
fresh spatially smooth noise keeps their variance at sigma**2. The result
has realistic predictability structure: persistence degrades with lead
time, climatology does not.
"""
import math
from datetime import timedelta

import numpy as np

from deepverif.ensemble.perturbation import smooth_noise
from deepverif.grid.grid_field import GridField, as_utc
from deepverif.stations.records import StationRecord


def climatology_values(spec, mean=285.0, amplitude=5.0):
    """H x W field mean + amplitude * sin(longitude)."""
    lons = np.deg2rad(spec.lon_array)
    return np.broadcast_to(mean + amplitude * np.sin(lons), spec.shape).copy()


def damped_advection(spec, start, hours, climatology, variable="t2m",
                     sigma=3.0, tau=36.0, shift_every=6, smoothing=3,
                     seed=0):
    """
    Hourly truth states of one variable.

    :param spec: GridSpec
    :param start: valid time of the first state
    :param hours: number of hourly states
    :param climatology: H x W array the anomalies are added to
    :return: dict valid_time -> GridField (analysis-style: init = valid,
        lead 0)
    """
    rng = np.random.default_rng(seed)
    rho = math.exp(-1.0 / tau)
    innovation = math.sqrt(1.0 - rho * rho) * sigma
    start = as_utc(start)
    climatology = np.asarray(climatology, dtype=np.float64)

    anomaly = sigma * smooth_noise(rng, spec.shape, smoothing)
    states = {}
    for hour in range(int(hours)):
        valid = start + timedelta(hours=hour)
        states[valid] = GridField(spec, variable, valid, 0,
                                  climatology + anomaly)
        if (hour + 1) % shift_every == 0:
            anomaly = np.roll(anomaly, 1, axis=1)
        anomaly = rho * anomaly + innovation * smooth_noise(
            rng, spec.shape, smoothing)
    return states


def station_records(states, stride=4, every=12, prefix="S"):
    """
    Observations at cell centers, sampled from the truth states.

    :param states: dict valid_time -> GridField
    :param stride: take every stride-th row and column
    :param every: only valid times at multiples of this many hours
    :return: list of StationRecords
    """
    records = []
    for valid, field in sorted(states.items()):
        if valid.hour % every:
            continue
        spec = field.spec
        for i in range(0, spec.H, stride):
            for j in range(0, spec.W, stride):
                records.append(StationRecord(
                    "{}{:03d}{:03d}".format(prefix, i, j), spec.lats[i],
                    spec.lons[j], valid, field.variable,
                    field.values[i, j]))
    return records
