"""
Where the command line looks for and puts files.

    forecasts   {forecast_dir}/{init:%Y%m%dT%H}/{variable}_L{lead:03}.gfd
    truth / IC  {truth_dir}/{valid:%Y%m%dT%H}/{variable}.gfd
    members     {out}/members/{init:%Y%m%dT%H}/{variable}_m{mm}_L{lead:03}.gfd
"""
import logging
from datetime import timedelta
from pathlib import Path

from deepverif.exceptions import FormatError
from deepverif.grid.accumulation import accumulate
from deepverif.grid.gfd import read_gfd
from deepverif.grid.grid_field import FieldStack, as_utc
from deepverif.variables import ACCUMULATED

logger = logging.getLogger(__name__)

MEMBERS_DIR = "members"
MANIFEST = "manifest.json"
TOY_PARAMS = "toy_params.json"


def time_dir(moment):
    return as_utc(moment).strftime("%Y%m%dT%H")


def forecast_path(forecast_dir, init_time, variable, lead):
    return (Path(forecast_dir) / time_dir(init_time)
            / "{}_L{:03d}.gfd".format(variable, int(lead)))


def truth_path(truth_dir, valid_time, variable):
    return Path(truth_dir) / time_dir(valid_time) / "{}.gfd".format(variable)


def _checked(field, variable, path):
    if field.variable != variable:
        raise FormatError("{}: holds {!r}, expected {!r}".format(
            path, field.variable, variable))
    return field


def load_forecast(forecast_dir, init_time, variable, lead):
    """
    Reads one forecast field. Accumulated variables are summed from their
    hourly source files ending at lead.

    :return: GridField, or None when lead is shorter than the window
    :raises FileNotFoundError: when a file is missing
    """
    if variable in ACCUMULATED:
        source, window = ACCUMULATED[variable]
        if lead < window:
            return None
        hourly = []
        for hour in range(lead - window + 1, lead + 1):
            path = forecast_path(forecast_dir, init_time, source, hour)
            hourly.append(_checked(read_gfd(path), source, path))
        return accumulate(hourly, window, variable=variable)
    path = forecast_path(forecast_dir, init_time, variable, lead)
    field = _checked(read_gfd(path), variable, path)
    if field.lead_time != lead or field.init_time != as_utc(init_time):
        raise FormatError("{}: header says init {} lead {} h".format(
            path, field.init_time, field.lead_time))
    return field


def load_truth(truth_dir, valid_time, variables):
    """
    Reads the truth state valid at valid_time.

    :return: FieldStack (lead 0, init = valid)
    :raises FileNotFoundError: when a file is missing
    """
    fields = []
    for variable in variables:
        path = truth_path(truth_dir, valid_time, variable)
        fields.append(_checked(read_gfd(path), variable, path))
    return FieldStack(tuple(fields))


def load_history(ic_dir, init_time, variables, length, spacing):
    """
    Analyses at init_time, init_time - spacing, ..., newest first.
    """
    return tuple(
        load_truth(ic_dir, as_utc(init_time) - timedelta(hours=k * spacing),
                   variables)
        for k in range(int(length)))


def load_truth_series(truth_dir, init_time, leads, variables):
    """
    Truth states of every lead that has files; missing leads are left out.

    :return: dict lead -> FieldStack
    """
    series = {}
    for lead in leads:
        valid = as_utc(init_time) + timedelta(hours=int(lead))
        try:
            series[lead] = load_truth(truth_dir, valid, variables)
        except FileNotFoundError:
            logger.debug("no truth valid at %s", valid)
    return series
