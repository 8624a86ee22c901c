"""
The score, ensemble, train and stations-validate commands.

Work is split into independent (init_time, lead) or init_time tasks that
run on a thread pool; their score contributions are reduced in task order
and every file is written from the calling thread.
"""
import json
import logging
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

from deepverif.cli import layout
from deepverif.ensemble.evaluation import ensemble_contributions
from deepverif.ensemble.runner import (ensemble_manifest, run_ensemble,
                                       write_members)
from deepverif.exceptions import NothingScored
from deepverif.forecasters.models import (ClimatologyForecaster,
                                          PersistenceForecaster,
                                          load_toy_model, save_toy_model)
from deepverif.forecasters.models.toy_forecaster import (ToyForecaster,
                                                         ToyModelParams)
from deepverif.forecasters.request import ForecastRequest
from deepverif.forecasters.training import ToyTrainer
from deepverif.forecasters.wrappers import TensorboardLogger
from deepverif.grid.grid_field import format_utc
from deepverif.grid.interpolation import Interp
from deepverif.grid.weights import WeightMode, lat_weights
from deepverif.metrics.score_table import ScoreAccumulator, write_sidecar
from deepverif.metrics.scores import CrpsVariant, weighted_mae, weighted_mse
from deepverif.stations.matching import match_forecast
from deepverif.stations.scoring import station_contributions
from deepverif.stations.station_io import load_stations

logger = logging.getLogger(__name__)

POOLING = ("errors are pooled over init times before the square root: "
           "grid fields enter with equal weight, stations per matched pair")


def _map(function, tasks, threads):
    """Applies function to every task, results in task order."""
    if threads > 1:
        with ThreadPoolExecutor(max_workers=int(threads)) as pool:
            return list(pool.map(function, tasks))
    return [function(task) for task in tasks]


def _init_times(config):
    init_times = config.init_times()
    if not init_times:
        raise NothingScored("no init times in range")
    return init_times


def _require(config, *names):
    for name in names:
        if getattr(config, name) is None:
            raise ValueError("{} is required for this command".format(name))


def _records(config):
    _require(config, "station_file")
    return load_stations(config.station_file).records


def _base_metadata(config, command, init_times):
    metadata = {
        "command": command,
        "reference": config.reference,
        "variables": list(config.variables),
        "region": config.region,
        "schedule": list(config.schedule),
        "start_date": config.start_date,
        "end_date": config.end_date,
        "n_init_times": len(init_times),
        "pooling": POOLING,
    }
    if config.reference == "stations":
        metadata["interp"] = Interp.parse(config.interp).value
        metadata["periodic_lon"] = bool(config.periodic_lon)
    return metadata


def _finish(accumulator, metadata, out, stem="scores"):
    table = accumulator.finalize(metadata)
    if not len(table):
        raise NothingScored("no scoreable pairs were produced")
    table.write(out, stem)
    logger.info("wrote %d scores to %s", len(table), out)
    return table


def _score_task(config, records, init_time, lead):
    counts = Counter()
    contributions = []
    for variable in config.variables:
        try:
            forecast = layout.load_forecast(config.forecast_dir, init_time,
                                            variable, lead)
        except FileNotFoundError as error:
            logger.debug("missing forecast: %s", error)
            counts["missing_forecast"] += 1
            continue
        if forecast is None:
            counts["short_window"] += 1
            continue

        if records is None:
            try:
                truth = layout.load_truth(config.truth_dir,
                                          forecast.valid_time, [variable])
            except FileNotFoundError as error:
                logger.debug("missing truth: %s", error)
                counts["missing_truth"] += 1
                continue
            target = truth[variable]
            weights = lat_weights(forecast.spec, WeightMode.SUM_ONE)
            cells = forecast.spec.H * forecast.spec.W
            for metric in config.metrics:
                score = weighted_mse if metric == "rmse" else weighted_mae
                contributions.append((
                    variable, lead, metric, "grid",
                    score(forecast, target, weights), 1.0, cells,
                    config.region))
            counts["fields"] += 1
        else:
            match = match_forecast(records, forecast, config.interp,
                                   config.periodic_lon)
            counts["out_of_domain"] += match.out_of_domain
            if not match.pairs:
                counts["no_pairs"] += 1
                continue
            for metric in config.metrics:
                contributions.extend(station_contributions(
                    match.pairs, metric, config.region))
            counts["pairs"] += len(match.pairs)
    return contributions, counts


def cmd_score(config):
    """
    Scores deterministic forecast files over the init-time schedule.

    :param config: validated RunConfig
    :return: ScoreTable, also written to config.out
    :raises NothingScored: when the schedule is empty or nothing matched
    """
    _require(config, "forecast_dir")
    if config.reference == "grid":
        _require(config, "truth_dir")
    init_times = _init_times(config)
    records = _records(config) if config.reference == "stations" else None
    tasks = [(t, lead) for t in init_times for lead in config.leads()]

    results = _map(lambda task: _score_task(config, records, *task), tasks,
                   config.threads)
    accumulator, counts = ScoreAccumulator(), Counter()
    for contributions, task_counts in results:
        accumulator.update(contributions)
        counts.update(task_counts)

    for reason in ("missing_forecast", "missing_truth", "no_pairs"):
        if counts[reason]:
            logger.warning("%d forecasts skipped: %s", counts[reason],
                           reason.replace("_", " "))
    metadata = _base_metadata(config, "score", init_times)
    metadata["metrics"] = list(config.metrics)
    metadata["counts"] = dict(sorted(counts.items()))
    return _finish(accumulator, metadata, config.out)


def build_model(config):
    """
    Forecaster named by config.model. The climatology model takes the
    climatology stored with the toy parameters at config.model_params.
    """
    if config.model == "persistence":
        return PersistenceForecaster()
    if config.model_params is None:
        raise ValueError("model {!r} needs model_params".format(
            config.model))
    toy = load_toy_model(config.model_params)
    if config.model == "climatology":
        return ClimatologyForecaster(toy.climatology)
    return toy


def cmd_ensemble(config):
    """
    Runs and scores a perturbation ensemble from every init time.

    :return: ScoreTable of rmse_ensmean and crps, written to config.out
        with a manifest.json
    """
    _require(config, "ic_source")
    if config.reference == "grid":
        _require(config, "truth_dir")
    init_times = _init_times(config)
    model = build_model(config)
    perturbation = config.perturbation()
    variant = CrpsVariant.parse(config.crps_variant)
    records = _records(config) if config.reference == "stations" else None
    leads = config.leads()
    out = Path(config.out)

    accumulator, counts = ScoreAccumulator(), Counter()
    skipped = {}
    for init_time in init_times:
        try:
            history = layout.load_history(config.ic_source, init_time,
                                          config.variables,
                                          model.history_length,
                                          config.history_spacing)
        except FileNotFoundError as error:
            logger.debug("missing initial conditions: %s", error)
            counts["missing_ic"] += 1
            continue
        ensembles = run_ensemble(model, history, perturbation, leads,
                                 config.threads, config.rollout_step)
        if records is None:
            truth = layout.load_truth_series(config.truth_dir, init_time,
                                             leads, config.variables)
        else:
            truth = records
        contributions, missing = ensemble_contributions(
            ensembles, truth, variant, config.interp, config.periodic_lon,
            config.region)
        accumulator.update(contributions)
        counts["runs"] += 1
        if missing:
            skipped[format_utc(init_time)] = missing
        if config.write_members:
            write_members(ensembles, out / layout.MEMBERS_DIR)

    if counts["missing_ic"]:
        logger.warning("%d init times skipped: missing initial conditions",
                       counts["missing_ic"])
    metadata = _base_metadata(config, "ensemble", init_times)
    metadata.update(model=model.name, crps_variant=variant.value,
                    counts=dict(sorted(counts.items())),
                    skipped_leads=skipped)
    table = _finish(accumulator, metadata, out)
    write_sidecar(out / layout.MANIFEST, ensemble_manifest(
        perturbation, model.name, leads, init_times, config.rollout_step,
        config.variables))
    return table


def training_dataset(config):
    """
    (ForecastRequest, truth FieldStack) pairs for every init time and every
    lead >= 1 with files on disk.
    """
    _require(config, "ic_source", "truth_dir")
    dataset, missing = [], 0
    for init_time in _init_times(config):
        try:
            history = layout.load_history(config.ic_source, init_time,
                                          config.variables,
                                          ToyForecaster.history_length,
                                          config.history_spacing)
        except FileNotFoundError:
            missing += 1
            continue
        leads = [lead for lead in config.leads() if lead >= 1]
        truth = layout.load_truth_series(config.truth_dir, init_time, leads,
                                         config.variables)
        missing += len(leads) - len(truth)
        dataset.extend((ForecastRequest(history, lead), state)
                       for lead, state in sorted(truth.items()))
    if missing:
        logger.warning("%d training samples skipped: missing files",
                       missing)
    return dataset


def cmd_train(config):
    """
    Fits the toy forecaster, starting from persistence, and writes its
    parameters and climatology to config.out.

    :return: Path of the parameters JSON
    """
    dataset = training_dataset(config)
    if not dataset:
        raise NothingScored("no training samples in range")
    spec = dataset[0][1].spec
    weights = lat_weights(spec, WeightMode.MEAN_ONE)
    trainer = ToyTrainer(ToyModelParams.persistence(config.variables),
                         dataset, weights, config.learning_rate)
    if config.tensorboard_dir is not None:
        trainer = TensorboardLogger(trainer, log_dir=config.tensorboard_dir)
    try:
        params = trainer.train(config.epochs)
    finally:
        if isinstance(trainer, TensorboardLogger):
            trainer.close()

    out = Path(config.out)
    path = save_toy_model(ToyForecaster(params, trainer.climatology),
                          out / layout.TOY_PARAMS)
    write_sidecar(out / "metadata.json", {
        "command": "train",
        "variables": list(config.variables),
        "n_samples": len(dataset),
        "epochs": trainer.epoch,
        "learning_rate": config.learning_rate,
        "initial_loss": trainer.initial_loss,
        "final_loss": trainer.loss,
    })
    logger.info("toy model written to %s", path)
    return path


def cmd_stations_validate(config):
    """
    Loads the station file and reports what survived validation.

    :return: report dict, also printed as JSON and written to
        {out}/stations_report.json
    """
    _require(config, "station_file")
    load = load_stations(config.station_file)
    per_variable = Counter(r.variable for r in load.records)
    report = {
        "station_file": str(config.station_file),
        "rows": load.total_rows,
        "kept": len(load.records),
        "rejected": load.rejected,
        "reasons": dict(sorted(load.reasons.items())),
        "variables": dict(sorted(per_variable.items())),
        "stations": len({r.station_id for r in load.records}),
    }
    write_sidecar(Path(config.out) / "stations_report.json", report)
    print(json.dumps(report, indent=2, sort_keys=True))
    return report
