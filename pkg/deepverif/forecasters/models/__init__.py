from deepverif.forecasters.models.base_forecaster import BaseForecaster
from deepverif.forecasters.models.climatology_forecaster import (
    ClimatologyForecaster, climatology_from_states)
from deepverif.forecasters.models.persistence_forecaster import \
    PersistenceForecaster
from deepverif.forecasters.models.toy_forecaster import (ToyCoefficients,
                                                         ToyForecaster,
                                                         ToyModelParams,
                                                         load_toy_model,
                                                         save_toy_model)
