import math
from dataclasses import dataclass
from datetime import datetime, timedelta

from deepverif.exceptions import InvalidData
from deepverif.grid.grid_field import as_utc
from deepverif.grid.interpolation import Interp
from deepverif.variables import STATION_VARIABLES, is_plausible


def normalize_station_lon(lon):
    """
    Maps a longitude into [-180, 180), leaving in-range values untouched.
    """
    lon = float(lon)
    if -180.0 <= lon < 180.0:
        return lon
    return (lon + 180.0) % 360.0 - 180.0


@dataclass(frozen=True)
class StationRecord:
    """
    One in-situ observation in canonical units.

    :raises InvalidData: when the record breaks a coordinate, variable or
        plausibility check
    """
    station_id: str
    lat: float
    lon: float
    time: datetime
    variable: str
    value: float

    def __post_init__(self):
        if not str(self.station_id):
            raise InvalidData("station_id must not be empty")
        lat, value = float(self.lat), float(self.value)
        if not -90.0 <= lat <= 90.0:
            raise InvalidData("latitude {} outside [-90, 90]".format(lat))
        if not math.isfinite(float(self.lon)):
            raise InvalidData("longitude must be finite")
        if self.variable not in STATION_VARIABLES:
            raise InvalidData("unknown station variable {!r}".format(
                self.variable))
        if not math.isfinite(value) or not is_plausible(self.variable, value):
            raise InvalidData("implausible {} value {}".format(
                self.variable, value))
        object.__setattr__(self, "station_id", str(self.station_id))
        object.__setattr__(self, "lat", lat)
        object.__setattr__(self, "lon", normalize_station_lon(self.lon))
        object.__setattr__(self, "time", as_utc(self.time))
        object.__setattr__(self, "value", value)


@dataclass(frozen=True)
class MatchedPair:
    """
    An observation joined with the forecast value extracted at its location.

    The record's time equals init_time + lead_time exactly.
    """
    record: StationRecord
    predicted: float
    lead_time: int
    init_time: datetime
    extraction: Interp

    def __post_init__(self):
        init_time = as_utc(self.init_time)
        object.__setattr__(self, "init_time", init_time)
        if self.record.time != init_time + timedelta(hours=self.lead_time):
            raise InvalidData("observation time {} is not valid time of "
                              "lead {} h".format(self.record.time,
                                                 self.lead_time))

    @property
    def error(self):
        return self.predicted - self.record.value
