from dataclasses import dataclass, field, replace
from datetime import datetime, timedelta, timezone

import numpy as np

from deepverif.exceptions import InvalidData, SpecMismatch
from deepverif.grid.grid_spec import GridSpec
from deepverif.variables import units_of


def as_utc(moment):
    """
    Returns a timezone-aware UTC datetime. Naive datetimes are taken to be
    UTC already.

    :param moment: datetime or ISO-8601 string
    """
    if isinstance(moment, str):
        moment = datetime.fromisoformat(moment.replace("Z", "+00:00"))
    if moment.tzinfo is None:
        return moment.replace(tzinfo=timezone.utc)
    return moment.astimezone(timezone.utc)


def format_utc(moment):
    """ISO-8601 representation with a trailing Z, e.g. 2023-01-01T00:00:00Z"""
    return as_utc(moment).strftime("%Y-%m-%dT%H:%M:%SZ")


def _frozen_values(values, shape):
    array = np.array(values, dtype=np.float64, copy=True)
    if array.shape != shape:
        raise SpecMismatch("values of shape {} do not match grid {}".format(
            array.shape, shape))
    if not np.all(np.isfinite(array)):
        raise InvalidData("field values must be finite")
    array.setflags(write=False)
    return array


@dataclass(frozen=True, eq=False)
class GridField:
    """
    One variable on a GridSpec at one (init_time, lead_time).

    Values are copied into a read-only float64 array on construction, so a
    GridField can be shared freely between threads.

    :param spec: the grid the values live on
    :param variable: variable id, e.g. "t2m"
    :param init_time: forecast initialization time (UTC)
    :param lead_time: whole hours since init_time, >= 0
    :param values: H x W array in the variable's canonical units
    :param derived: True for fields computed from other forecasts, such as
        an ensemble mean
    """
    spec: GridSpec
    variable: str
    init_time: datetime
    lead_time: int
    values: np.ndarray
    derived: bool = field(default=False)

    def __post_init__(self):
        if not self.variable:
            raise ValueError("variable id must not be empty")
        if int(self.lead_time) != self.lead_time or self.lead_time < 0:
            raise ValueError("lead_time must be a whole number of hours >= 0")
        object.__setattr__(self, "lead_time", int(self.lead_time))
        object.__setattr__(self, "init_time", as_utc(self.init_time))
        object.__setattr__(self, "values",
                           _frozen_values(self.values, self.spec.shape))

    @property
    def valid_time(self):
        return self.init_time + timedelta(hours=self.lead_time)

    @property
    def units(self):
        return units_of(self.variable)

    def with_values(self, values, **changes):
        """
        Returns a copy of this field holding new values, optionally with
        other attributes replaced as well.
        """
        return replace(self, values=values, **changes)

    def same_grid(self, other):
        """
        Raises SpecMismatch unless other shares spec and variable.
        """
        if self.spec != other.spec:
            raise SpecMismatch("fields live on different grids")
        if self.variable != other.variable:
            raise SpecMismatch("variables differ: {} vs {}".format(
                self.variable, other.variable))


@dataclass(frozen=True, eq=False)
class FieldStack:
    """
    C GridFields of distinct variables sharing spec, init_time and
    lead_time. This is the state a forecaster consumes and produces.

    :param fields: tuple of GridFields, one per variable, in channel order
    """
    fields: tuple

    def __post_init__(self):
        fields = tuple(self.fields)
        object.__setattr__(self, "fields", fields)
        if not fields:
            raise ValueError("a stack needs at least one field")
        first = fields[0]
        for other in fields[1:]:
            if other.spec != first.spec:
                raise SpecMismatch("stack fields live on different grids")
            if (other.init_time != first.init_time
                    or other.lead_time != first.lead_time):
                raise SpecMismatch("stack fields differ in init/lead time")
        if len({f.variable for f in fields}) != len(fields):
            raise SpecMismatch("stack variables must be unique")

    @classmethod
    def from_array(cls, array, spec, variables, init_time, lead_time,
                   derived=False):
        """
        Builds a stack from a C x H x W array.

        :param array: values, channel order following variables
        :param spec: GridSpec of every channel
        :param variables: sequence of C variable ids
        :return: FieldStack
        """
        array = np.asarray(array, dtype=np.float64)
        if array.shape != (len(variables),) + spec.shape:
            raise SpecMismatch("array of shape {} does not match {} "
                               "variables on grid {}".format(
                                   array.shape, len(variables), spec.shape))
        return cls(tuple(
            GridField(spec, variable, init_time, lead_time, array[c],
                      derived=derived)
            for c, variable in enumerate(variables)))

    @property
    def spec(self):
        return self.fields[0].spec

    @property
    def variables(self):
        return tuple(f.variable for f in self.fields)

    @property
    def init_time(self):
        return self.fields[0].init_time

    @property
    def lead_time(self):
        return self.fields[0].lead_time

    @property
    def valid_time(self):
        return self.fields[0].valid_time

    def __len__(self):
        return len(self.fields)

    def __iter__(self):
        return iter(self.fields)

    def __getitem__(self, variable):
        for f in self.fields:
            if f.variable == variable:
                return f
        raise KeyError(variable)

    def as_array(self):
        """C x H x W float64 copy of the stacked values."""
        return np.stack([f.values for f in self.fields])

    def same_grid(self, other):
        """
        Raises SpecMismatch unless other has the same spec and variables in
        the same order.
        """
        if self.spec != other.spec:
            raise SpecMismatch("stacks live on different grids")
        if self.variables != other.variables:
            raise SpecMismatch("stack variables differ: {} vs {}".format(
                self.variables, other.variables))
