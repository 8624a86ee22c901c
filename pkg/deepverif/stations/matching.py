import logging
from collections import namedtuple

import numpy as np

from deepverif.grid.interpolation import Interp, values_at_points
from deepverif.stations.records import MatchedPair

logger = logging.getLogger(__name__)

MatchResult = namedtuple("MatchResult",
                         ["pairs", "out_of_domain", "unmatched"])
MatchResult.__doc__ = """
Result of match_forecast.

pairs: MatchedPairs in record order; out_of_domain: records of the right
variable and time lying outside the grid; unmatched: records whose variable
or time does not match the field.
"""


def select_records(records, variable, valid_time):
    """Records of one variable observed exactly at valid_time."""
    return [r for r in records
            if r.variable == variable and r.time == valid_time]


def match_forecast(records, field, method=Interp.NEAREST,
                   periodic_lon=False):
    """
    Joins observations with a forecast field at the field's valid time.

    Only records of the field's variable whose time equals
    init_time + lead_time are paired; there is no tolerance window.

    :param records: sequence of StationRecords
    :param field: forecast GridField
    :param method: Interp used to sample the field at station locations
    :param periodic_lon: wrap across the longitude seam
    :return: MatchResult
    """
    method = Interp.parse(method)
    records = list(records)
    candidates = select_records(records, field.variable, field.valid_time)
    unmatched = len(records) - len(candidates)
    if not candidates:
        return MatchResult([], 0, unmatched)

    lats = np.array([r.lat for r in candidates])
    lons = np.array([r.lon for r in candidates])
    values, inside = values_at_points(field, lats, lons, method, periodic_lon)

    pairs = [
        MatchedPair(record, float(value), field.lead_time, field.init_time,
                    method)
        for record, value, keep in zip(candidates, values, inside) if keep
    ]
    out_of_domain = len(candidates) - len(pairs)
    if out_of_domain:
        logger.info("%s L%03d: %d stations outside the grid skipped",
                    field.variable, field.lead_time, out_of_domain)
    return MatchResult(pairs, out_of_domain, unmatched)


def station_timeseries(fields, lat, lon, method=Interp.NEAREST,
                       periodic_lon=False):
    """
    Forecast values at one location across lead times.

    :param fields: GridFields of one forecast (any order)
    :return: list of (lead_time, valid_time, value) sorted by lead time;
        empty when the location lies outside the grid
    """
    series = []
    for field in sorted(fields, key=lambda f: f.lead_time):
        values, inside = values_at_points(field, [lat], [lon], method,
                                          periodic_lon)
        if not inside[0]:
            return []
        series.append((field.lead_time, field.valid_time, float(values[0])))
    return series
