from datetime import datetime, timedelta, timezone

import numpy as np
import pytest

from deepverif.grid.grid_field import FieldStack, GridField
from deepverif.grid.grid_spec import GridSpec

INIT = datetime(2023, 1, 1, tzinfo=timezone.utc)


@pytest.fixture
def init_time():
    return INIT


@pytest.fixture
def spec():
    """4 x 8 global grid, south to north, [0, 360) longitudes."""
    return GridSpec.regular(-67.5, 45.0, 4, 0.0, 45.0, 8)


@pytest.fixture
def scalar_spec():
    return GridSpec.regular(0.0, 0.0, 1, 0.0, 0.0, 1)


@pytest.fixture
def make_field():
    def factory(spec, values, variable="t2m", init_time=INIT, lead_time=0,
                derived=False):
        values = np.broadcast_to(np.asarray(values, dtype=np.float64),
                                 spec.shape)
        return GridField(spec, variable, init_time, lead_time, values,
                         derived=derived)
    return factory


@pytest.fixture
def make_state(make_field):
    """FieldStack of one or more variables valid at init_time + lead."""
    def factory(spec, values, variables=("t2m",), init_time=INIT,
                lead_time=0):
        if not isinstance(values, (list, tuple)):
            values = [values] * len(variables)
        return FieldStack(tuple(
            make_field(spec, v, variable, init_time, lead_time)
            for variable, v in zip(variables, values)))
    return factory


@pytest.fixture
def analysis():
    """Analysis-style state: init = valid time, lead 0."""
    def factory(spec, values, valid_time, variables=("t2m",)):
        if not isinstance(values, (list, tuple)):
            values = [values] * len(variables)
        return FieldStack(tuple(
            GridField(spec, variable, valid_time, 0,
                      np.broadcast_to(np.asarray(v, dtype=np.float64),
                                      spec.shape))
            for variable, v in zip(variables, values)))
    return factory


@pytest.fixture
def hours():
    def factory(n):
        return timedelta(hours=n)
    return factory
