import logging
from collections import Counter, namedtuple
from pathlib import Path

import pandas as pd

from deepverif.exceptions import FormatError, InvalidData
from deepverif.grid.grid_field import format_utc
from deepverif.stations.records import StationRecord

logger = logging.getLogger(__name__)

HEADER = ("station_id", "lat", "lon", "time", "variable", "value")

StationLoad = namedtuple("StationLoad",
                         ["records", "rejected", "total_rows", "reasons"])
StationLoad.__doc__ = """
Result of load_stations.

records: validated StationRecords in file order; rejected: number of
dropped rows; total_rows: number of data rows read; reasons: Counter of
rejection reasons ("unparsable", "implausible", "duplicate").
"""


def _read_header(path):
    with path.open("r", encoding="utf-8", newline="") as handle:
        return handle.readline().rstrip("\r\n")


def load_stations(path):
    """
    Reads and validates a station CSV file.

    Rows that cannot be parsed, fail the plausibility checks, or repeat an
    earlier (station_id, time, variable) are dropped and counted.

    :param path: CSV with header station_id,lat,lon,time,variable,value
    :return: StationLoad
    :raises FormatError: when the header is not exactly the expected one
    """
    path = Path(path)
    header = _read_header(path)
    if header != ",".join(HEADER):
        raise FormatError("{}: expected header {!r}, got {!r}".format(
            path, ",".join(HEADER), header))

    bad_lines = []

    def skip_bad_line(line):
        bad_lines.append(line)
        return None

    frame = pd.read_csv(path, dtype=str, keep_default_na=False,
                        engine="python", on_bad_lines=skip_bad_line)
    reasons = Counter()
    for line in bad_lines:
        logger.warning("%s: skipped malformed row %r", path, line)
        reasons["unparsable"] += 1

    lats = pd.to_numeric(frame["lat"], errors="coerce")
    lons = pd.to_numeric(frame["lon"], errors="coerce")
    values = pd.to_numeric(frame["value"], errors="coerce")
    times = pd.to_datetime(frame["time"], utc=True, errors="coerce",
                           format="ISO8601")

    records = []
    seen = set()
    for row in range(len(frame)):
        station_id = frame["station_id"].iat[row]
        variable = frame["variable"].iat[row]
        fields = (station_id, variable, lats.iat[row], lons.iat[row],
                  values.iat[row], times.iat[row])
        if any(pd.isna(item) or (isinstance(item, str) and not item)
               for item in fields):
            logger.warning("%s: skipped unparsable row %d", path, row + 2)
            reasons["unparsable"] += 1
            continue
        try:
            record = StationRecord(station_id, lats.iat[row], lons.iat[row],
                                   times.iat[row].to_pydatetime(),
                                   variable, values.iat[row])
        except InvalidData as error:
            logger.debug("%s: row %d rejected: %s", path, row + 2, error)
            reasons["implausible"] += 1
            continue
        key = (record.station_id, record.time, record.variable)
        if key in seen:
            reasons["duplicate"] += 1
            continue
        seen.add(key)
        records.append(record)

    rejected = sum(reasons.values())
    total_rows = len(frame) + len(bad_lines)
    logger.info("%s: %d of %d rows kept, %d rejected %s", path, len(records),
                total_rows, rejected, dict(reasons))
    return StationLoad(records, rejected, total_rows, reasons)


def save_stations(records, path):
    """
    Writes records in the station CSV schema (UTF-8, LF line endings).

    :return: Path written
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    frame = pd.DataFrame(
        [(r.station_id, r.lat, r.lon, format_utc(r.time), r.variable,
          r.value) for r in records],
        columns=list(HEADER))
    frame.to_csv(path, index=False, lineterminator="\n", encoding="utf-8")
    return path
