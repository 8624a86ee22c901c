from deepverif.forecasters.models import (BaseForecaster,
                                          ClimatologyForecaster,
                                          PersistenceForecaster,
                                          ToyCoefficients, ToyForecaster,
                                          ToyModelParams)
from deepverif.forecasters.request import ForecastRequest
from deepverif.forecasters.training import (ToyTrainer, check_gradient,
                                            climatology_from_dataset,
                                            train_toy)
