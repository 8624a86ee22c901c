"""
Registry of the variables deepverif knows about.

Values are always held in the canonical units listed here. The plausibility
ranges act as a coarse pre-QC filter for station observations.
"""
from collections import namedtuple

VariableInfo = namedtuple("VariableInfo",
                          ["name", "units", "lower", "upper", "station"])

VARIABLES = {
    info.name: info
    for info in (
        VariableInfo("t2m", "K", 180.0, 340.0, True),
        VariableInfo("ws10", "m s-1", 0.0, 120.0, True),
        VariableInfo("ws100", "m s-1", 0.0, 120.0, True),
        VariableInfo("sp", "hPa", 400.0, 1100.0, True),
        # 6 h at 1500 W m-2 stays below 3.3e7 J m-2
        VariableInfo("ssrd6h", "J m-2", 0.0, 4.0e7, True),
        VariableInfo("ssrd", "J m-2", 0.0, 7.0e6, False),
    )
}

STATION_VARIABLES = tuple(name for name, info in VARIABLES.items()
                          if info.station)

# Hourly source variable and window of every accumulated variable.
ACCUMULATED = {"ssrd6h": ("ssrd", 6)}


def units_of(variable):
    """
    Canonical units of a registered variable, "1" for anything else.

    :param variable: variable id, e.g. "t2m"
    :return: units string
    """
    info = VARIABLES.get(variable)
    return info.units if info is not None else "1"


def is_plausible(variable, value):
    """
    Checks a value against the variable's plausibility range.

    :param variable: a registered variable id
    :param value: value in canonical units
    :return: bool, False for unknown variables
    """
    info = VARIABLES.get(variable)
    if info is None:
        return False
    return info.lower <= value <= info.upper
