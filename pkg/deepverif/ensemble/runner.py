import logging
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

from deepverif.ensemble.ensemble import Ensemble
from deepverif.ensemble.perturbation import perturb_ic
from deepverif.exceptions import MemberError
from deepverif.forecasters.request import ForecastRequest
from deepverif.grid.gfd import write_gfd
from deepverif.grid.grid_field import FieldStack, as_utc, format_utc

logger = logging.getLogger(__name__)


def member_file_name(variable, member, lead):
    return "{}_m{:02d}_L{:03d}.gfd".format(variable, int(member), int(lead))


def _as_history(ic):
    if isinstance(ic, FieldStack):
        return (ic,)
    return tuple(ic)


def run_member(model, ic, cfg, member, leads, step=None):
    """
    Propagates one member from its own perturbed initial conditions.

    :param model: BaseForecaster
    :param ic: FieldStack or history of FieldStacks, newest first
    :param cfg: PerturbationConfig
    :param member: member index
    :param leads: lead times in hours; lead 0 is the perturbed state itself
    :param step: rollout step in hours, None for direct prediction
    :return: dict lead -> FieldStack
    :raises MemberError: wrapping whatever the model raised
    """
    try:
        history = tuple(perturb_ic(state, cfg, member)
                        for state in _as_history(ic))
        trajectory = {}
        for lead in leads:
            if lead == 0:
                trajectory[lead] = history[0]
                continue
            request = ForecastRequest(history, lead)
            if step is None:
                trajectory[lead] = model.predict(request)
            else:
                trajectory[lead] = model.rollout(request, step)
        return trajectory
    except Exception as error:
        raise MemberError(member, error) from error


def run_ensemble(model, ic, cfg, leads, threads=1, step=None):
    """
    Runs every member of a perturbation ensemble.

    Members only ever see their own perturbed initial conditions, and the
    results are collected in member order, so the output does not depend
    on the number of threads.

    :param model: BaseForecaster, treated as immutable
    :param ic: FieldStack or history of FieldStacks, newest first
    :param cfg: PerturbationConfig
    :param leads: iterable of lead times in hours
    :param threads: worker threads propagating members
    :param step: rollout step in hours, None for direct prediction
    :return: dict lead -> Ensemble, in lead order
    """
    leads = sorted({int(lead) for lead in leads})
    members = range(cfg.n_members)

    def propagate(member):
        return run_member(model, ic, cfg, member, leads, step)

    if threads > 1:
        with ThreadPoolExecutor(max_workers=int(threads)) as pool:
            trajectories = list(pool.map(propagate, members))
    else:
        trajectories = [propagate(member) for member in members]

    logger.debug("propagated %d members to %d leads", cfg.n_members,
                 len(leads))
    return {
        lead: Ensemble(tuple(trajectory[lead] for trajectory in trajectories),
                       cfg.seed, tuple(members))
        for lead in leads
    }


def write_members(ensembles, directory):
    """
    Writes every member field as {variable}_m{member:02}_L{lead:03}.gfd
    under directory/{init:%Y%m%dT%H}/.

    :return: list of Paths written
    """
    directory = Path(directory)
    written = []
    for lead, ensemble in sorted(ensembles.items()):
        init_dir = directory / as_utc(ensemble.init_time).strftime(
            "%Y%m%dT%H")
        for member_id, member in zip(ensemble.member_ids, ensemble.members):
            for field in member:
                written.append(write_gfd(field, init_dir / member_file_name(
                    field.variable, member_id, lead)))
    return written


def ensemble_manifest(cfg, model_name, leads, init_times=(), step=None,
                      variables=()):
    """
    JSON-ready description of an ensemble run: seed, configuration and the
    member list.
    """
    return {
        "model": model_name,
        "perturbation": cfg.to_dict(),
        "seed": cfg.seed,
        "members": list(range(cfg.n_members)),
        "control_member": 0,
        "leads": sorted(int(lead) for lead in leads),
        "rollout_step": step,
        "variables": list(variables),
        "init_times": [format_utc(t) for t in init_times],
    }
