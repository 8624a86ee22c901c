from deepverif.metrics.accumulator import Accumulator, fsum_array
from deepverif.metrics.score_table import (ScoreAccumulator, ScoreKey,
                                           ScoreTable)
from deepverif.metrics.scores import (CrpsVariant, crps_decomposition,
                                      crps_field, crps_pointwise, crps_values,
                                      ensemble_mean, point_rmse,
                                      training_loss, weighted_mae,
                                      weighted_mse, weighted_rmse)
