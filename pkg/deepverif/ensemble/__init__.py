from deepverif.ensemble.ensemble import Ensemble, PerturbationConfig
from deepverif.ensemble.evaluation import (ensemble_contributions,
                                           evaluate_ensemble)
from deepverif.ensemble.perturbation import perturb_ic
from deepverif.ensemble.runner import (ensemble_manifest, run_ensemble,
                                       write_members)
