"""
Reader and writer of the GFD v1 gridded field format.

A file is a text header of key=value lines terminated by a blank line,
followed by H*W little-endian float32 values in row-major (latitude-major)
order.
"""
import logging
from pathlib import Path

import numpy as np

from deepverif.exceptions import FormatError
from deepverif.grid.grid_field import GridField, as_utc, format_utc
from deepverif.grid.grid_spec import GridSpec

logger = logging.getLogger(__name__)

VERSION = "1"
HEADER_KEYS = ("version", "variable", "init_time", "lead_hours", "H", "W",
               "lat0", "dlat", "lon0", "dlon", "dtype")
PAYLOAD_DTYPE = np.dtype("<f4")


def encode_gfd(field):
    """
    Serializes a GridField to GFD v1 bytes.

    :raises FormatError: when the field's grid is not evenly spaced
    """
    lat0, dlat, lon0, dlon = field.spec.regular_params()
    header = {
        "version": VERSION,
        "variable": field.variable,
        "init_time": format_utc(field.init_time),
        "lead_hours": str(field.lead_time),
        "H": str(field.spec.H),
        "W": str(field.spec.W),
        "lat0": repr(lat0),
        "dlat": repr(dlat),
        "lon0": repr(lon0),
        "dlon": repr(dlon),
        "dtype": "f32",
    }
    text = "".join("{}={}\n".format(key, header[key]) for key in HEADER_KEYS)
    payload = np.ascontiguousarray(field.values, dtype=PAYLOAD_DTYPE)
    return text.encode("ascii") + b"\n" + payload.tobytes(order="C")


def decode_gfd(data, source="<bytes>"):
    """
    Parses GFD v1 bytes into a GridField.

    :param data: file contents
    :param source: name used in error messages
    :raises FormatError: on unknown versions, missing keys or a payload of
        the wrong length
    """
    separator = data.find(b"\n\n")
    if separator < 0:
        raise FormatError("{}: header is not terminated by a blank line"
                          .format(source))
    try:
        lines = data[:separator].decode("ascii").split("\n")
    except UnicodeDecodeError as error:
        raise FormatError("{}: header is not ASCII".format(source)) from error

    header = {}
    for line in lines:
        key, sep, value = line.partition("=")
        if not sep:
            raise FormatError("{}: malformed header line {!r}".format(
                source, line))
        header[key.strip()] = value.strip()

    if "version" not in header:
        raise FormatError("{}: missing key 'version'".format(source))
    if header["version"] != VERSION:
        raise FormatError("{}: unsupported GFD version {!r}".format(
            source, header["version"]))
    missing = [key for key in HEADER_KEYS if key not in header]
    if missing:
        raise FormatError("{}: missing keys {}".format(source,
                                                       ", ".join(missing)))
    if header["dtype"] != "f32":
        raise FormatError("{}: unsupported dtype {!r}".format(
            source, header["dtype"]))

    try:
        n_lat, n_lon = int(header["H"]), int(header["W"])
        lead = int(header["lead_hours"])
        spec = GridSpec.regular(float(header["lat0"]), float(header["dlat"]),
                                n_lat, float(header["lon0"]),
                                float(header["dlon"]), n_lon)
        init_time = as_utc(header["init_time"])
    except ValueError as error:
        raise FormatError("{}: {}".format(source, error)) from error

    payload = data[separator + 2:]
    expected = n_lat * n_lon * PAYLOAD_DTYPE.itemsize
    if len(payload) != expected:
        raise FormatError("{}: payload has {} bytes, expected {}".format(
            source, len(payload), expected))
    values = np.frombuffer(payload, dtype=PAYLOAD_DTYPE).reshape(n_lat, n_lon)
    return GridField(spec, header["variable"], init_time, lead,
                     values.astype(np.float64))


def write_gfd(field, path):
    """
    Writes a GridField to path, creating parent directories.

    :return: Path written
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_bytes(encode_gfd(field))
    logger.debug("wrote %s", path)
    return path


def read_gfd(path):
    """
    Reads a GFD v1 file.

    :return: GridField with float64 values
    """
    path = Path(path)
    return decode_gfd(path.read_bytes(), source=str(path))
