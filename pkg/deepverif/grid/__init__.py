from deepverif.grid.accumulation import accumulate, accumulate_series
from deepverif.grid.gfd import read_gfd, write_gfd
from deepverif.grid.grid_field import FieldStack, GridField
from deepverif.grid.grid_spec import GridSpec
from deepverif.grid.interpolation import (Interp, value_at_point,
                                          values_at_points)
from deepverif.grid.weights import (LatWeights, WeightMode, lat_weights,
                                    uniform_weights)
