import numpy as np

from deepverif.exceptions import MissingStep, SpecMismatch


def _sorted_run(fields):
    fields = sorted(fields, key=lambda f: f.lead_time)
    if not fields:
        raise MissingStep("no fields to accumulate")
    first = fields[0]
    for other in fields[1:]:
        if (other.spec != first.spec or other.variable != first.variable
                or other.init_time != first.init_time):
            raise SpecMismatch("accumulated fields must share grid, "
                               "variable and init time")
    leads = [f.lead_time for f in fields]
    for previous, current in zip(leads, leads[1:]):
        if current == previous:
            raise SpecMismatch("duplicate lead time {} h".format(current))
        if current != previous + 1:
            raise MissingStep("lead times jump from {} h to {} h".format(
                previous, current))
    return fields


def _window_sum(fields):
    # sum along the window axis; float64 with a short fixed order
    return np.add.reduce(np.stack([f.values for f in fields]), axis=0)


def accumulate(fields, window, variable=None):
    """
    Sums hourly fields over the last `window` hours of a contiguous run.

    Each input field holds the amount accumulated over the hour ending at
    its lead time, so the result ending at lead L covers (L - window, L].

    :param fields: GridFields sharing spec, variable and init time, with
        contiguous hourly lead times
    :param window: window length in hours, >= 1
    :param variable: variable id of the result, defaults to the input's
    :return: GridField at the last lead time
    :raises MissingStep: on gaps or when the run is shorter than the window
    :raises SpecMismatch: on mixed grids, variables or init times
    """
    window = int(window)
    if window < 1:
        raise ValueError("window must be at least one hour")
    fields = _sorted_run(fields)
    if len(fields) < window:
        raise MissingStep("{} hourly fields cannot cover a {} h window"
                          .format(len(fields), window))
    last = fields[-1]
    return last.with_values(_window_sum(fields[-window:]),
                            variable=variable or last.variable)


def accumulate_series(fields, window, variable=None):
    """
    Rolling accumulations for every lead time with a full window behind it.

    :return: dict lead_time -> accumulated GridField
    """
    fields = _sorted_run(fields)
    series = {}
    for end in range(window, len(fields) + 1):
        result = accumulate(fields[end - window:end], window, variable)
        series[result.lead_time] = result
    return series
