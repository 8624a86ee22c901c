from deepverif.stations.matching import (match_forecast, select_records,
                                         station_timeseries)
from deepverif.stations.records import MatchedPair, StationRecord
from deepverif.stations.scoring import score_stations, station_contributions
from deepverif.stations.station_io import load_stations, save_stations
