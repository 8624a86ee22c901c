from datetime import datetime, timezone

import numpy as np

from deepverif.exceptions import EmptyInput, SpecMismatch
from deepverif.forecasters.models.base_forecaster import BaseForecaster
from deepverif.grid.grid_field import FieldStack

# Climatologies are not tied to a forecast; they carry this fixed stamp.
CLIMATOLOGY_TIME = datetime(1970, 1, 1, tzinfo=timezone.utc)


def climatology_from_states(states):
    """
    Per-cell mean of a set of states.

    :param states: iterable of FieldStacks sharing spec and variables
    :return: FieldStack stamped CLIMATOLOGY_TIME, lead 0
    :raises EmptyInput: when no state is given
    """
    states = list(states)
    if not states:
        raise EmptyInput("a climatology needs at least one state")
    first = states[0]
    for state in states[1:]:
        first.same_grid(state)
    mean = np.mean(np.stack([state.as_array() for state in states]), axis=0)
    return FieldStack.from_array(mean, first.spec, first.variables,
                                 CLIMATOLOGY_TIME, 0, derived=True)


class ClimatologyForecaster(BaseForecaster):
    """
    Predicts the long-run per-cell mean state at every lead time.

    :param climatology: FieldStack holding one mean field per variable
    """
    name = "climatology"

    def __init__(self, climatology):
        self.climatology = climatology
        self.variables = climatology.variables

    def climatology_array(self, spec, variables):
        """
        C x H x W climatology in the given channel order.

        :raises SpecMismatch: when spec differs from the climatology's grid
        """
        if spec != self.climatology.spec:
            raise SpecMismatch("climatology lives on a different grid")
        return np.stack([self.climatology[v].values for v in variables])

    def forecast(self, history, lead):
        newest = history[0]
        return self.climatology_array(newest.spec, newest.variables)
