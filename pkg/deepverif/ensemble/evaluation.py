"""
Scores of perturbation ensembles against gridded truth or stations.

Two metrics are produced per (variable, lead): the RMSE of the ensemble
mean ("rmse_ensmean") and the CRPS over the members ("crps"). Both are
emitted as ScoreAccumulator contributions so several init times can be
pooled before finalizing.
"""
import logging
from collections.abc import Mapping

import numpy as np

from deepverif.grid.interpolation import Interp, values_at_points
from deepverif.grid.weights import WeightMode, lat_weights
from deepverif.metrics.accumulator import fsum_array
from deepverif.metrics.score_table import ScoreAccumulator
from deepverif.metrics.scores import (CrpsVariant, crps_field, crps_values,
                                      weighted_mse)
from deepverif.stations.matching import select_records
from deepverif.stations.scoring import REFERENCE as STATIONS

logger = logging.getLogger(__name__)

METRICS = ("rmse_ensmean", "crps")


def grid_contributions(ensemble, truth, weights=None,
                       variant=CrpsVariant.STANDARD_ABSOLUTE,
                       region="global"):
    """
    :param ensemble: Ensemble at one lead
    :param truth: FieldStack valid at the ensemble's valid time
    :param weights: SUM_ONE LatWeights, built from the grid when omitted
    :return: list of contribution tuples for a ScoreAccumulator
    """
    if weights is None:
        weights = lat_weights(ensemble.spec, WeightMode.SUM_ONE)
    contributions = []
    lead = ensemble.lead_time
    cells = ensemble.spec.H * ensemble.spec.W
    for variable in ensemble.variables:
        target = truth[variable]
        mse = weighted_mse(ensemble.mean(variable), target, weights)
        crps = crps_field(ensemble[variable], target, weights, variant)
        contributions.append((variable, lead, "rmse_ensmean", "grid", mse,
                              1.0, cells, region))
        contributions.append((variable, lead, "crps", "grid", crps, 1.0,
                              cells, region))
    return contributions


def station_contributions(ensemble, records, method=Interp.NEAREST,
                          periodic_lon=False,
                          variant=CrpsVariant.STANDARD_ABSOLUTE,
                          region="global"):
    """
    Extracts every member at the station points, then scores the point
    ensembles; every station weighs the same.

    :param records: StationRecords; only those of a scored variable valid
        at the ensemble's valid time are used
    :return: list of contribution tuples for a ScoreAccumulator
    """
    method = Interp.parse(method)
    contributions = []
    lead = ensemble.lead_time
    for variable in ensemble.variables:
        candidates = select_records(records, variable, ensemble.valid_time)
        if not candidates:
            continue
        lats = np.array([r.lat for r in candidates])
        lons = np.array([r.lon for r in candidates])
        obs = np.array([r.value for r in candidates])
        extracted = [values_at_points(field, lats, lons, method, periodic_lon)
                     for field in ensemble[variable]]
        inside = extracted[0][1]
        if not np.any(inside):
            continue
        values = np.stack([v[inside] for v, _ in extracted])
        obs = obs[inside]
        n = int(obs.size)
        errors = values.mean(axis=0) - obs
        contributions.append((variable, lead, "rmse_ensmean", STATIONS,
                              fsum_array(errors * errors), n, n, region))
        contributions.append((variable, lead, "crps", STATIONS,
                              fsum_array(crps_values(values, obs, variant)),
                              n, n, region))
    return contributions


def ensemble_contributions(ensembles, truth,
                           variant=CrpsVariant.STANDARD_ABSOLUTE,
                           method=Interp.NEAREST, periodic_lon=False,
                           region="global"):
    """
    Contributions of every lead of one ensemble run.

    :param ensembles: dict lead -> Ensemble
    :param truth: Mapping lead -> FieldStack for grid truth, or a sequence
        of StationRecords
    :return: (contributions, skipped_leads)
    """
    variant = CrpsVariant.parse(variant)
    contributions, skipped = [], []
    grid = isinstance(truth, Mapping)
    records = None if grid else list(truth)
    for lead, ensemble in sorted(ensembles.items()):
        if grid:
            if lead not in truth:
                skipped.append(lead)
                continue
            found = grid_contributions(ensemble, truth[lead], None, variant,
                                       region)
        else:
            found = station_contributions(ensemble, records, method,
                                          periodic_lon, variant, region)
            if not found:
                skipped.append(lead)
                continue
        contributions.extend(found)
    if skipped:
        logger.warning("no truth at %d leads, skipped: %s", len(skipped),
                       skipped)
    return contributions, skipped


def evaluate_ensemble(ensembles, truth,
                      variant=CrpsVariant.STANDARD_ABSOLUTE,
                      method=Interp.NEAREST, periodic_lon=False,
                      region="global", metadata=None):
    """
    rmse_ensmean and crps of an ensemble run, per variable and lead.

    Leads without truth are skipped, logged and listed in the table's
    metadata under "skipped_leads".

    :param ensembles: dict lead -> Ensemble
    :param truth: Mapping lead -> FieldStack (reference "grid") or a
        sequence of StationRecords (reference "stations")
    :param variant: CrpsVariant
    :return: ScoreTable
    """
    contributions, skipped = ensemble_contributions(
        ensembles, truth, variant, method, periodic_lon, region)
    metadata = dict(metadata or {})
    metadata.setdefault("crps_variant", CrpsVariant.parse(variant).value)
    metadata["skipped_leads"] = skipped
    return ScoreAccumulator().update(contributions).finalize(metadata)
