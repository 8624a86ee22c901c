"""
Deterministic and probabilistic scores.

Grid scores use SUM_ONE latitude weights, so every weighted sum below is a
weighted average. Point scores weigh every pair equally.
"""
import math
from enum import Enum

import numpy as np

from deepverif.exceptions import (EmptyEnsemble, EmptyInput, InvalidData,
                                  SpecMismatch)
from deepverif.grid.grid_field import FieldStack, GridField
from deepverif.grid.weights import WeightMode
from deepverif.metrics.accumulator import fsum_array

EPS = np.finfo(np.float64).eps
ROUNDING_ULPS = 64


class CrpsVariant(Enum):
    """
    STANDARD_ABSOLUTE is the usual ensemble estimator built on absolute
    differences. PAPER_SQUARED keeps the skill - spread form with squared
    differences.
    """
    STANDARD_ABSOLUTE = "standard"
    PAPER_SQUARED = "paper"

    @classmethod
    def parse(cls, value):
        if isinstance(value, cls):
            return value
        return cls(str(value).lower())


def _check_pair(pred, truth, weights):
    pred.same_grid(truth)
    if pred.valid_time != truth.valid_time:
        raise SpecMismatch("forecast valid at {} scored against truth valid "
                           "at {}".format(pred.valid_time, truth.valid_time))
    weights.check(pred.spec, WeightMode.SUM_ONE)


def _finite(value, what):
    if not math.isfinite(value):
        raise InvalidData("{} is not finite".format(what))
    return value


def weighted_mse(pred, truth, weights):
    """
    Latitude-weighted mean squared error of one field.

    :param pred: forecast GridField
    :param truth: reference GridField valid at the same time
    :param weights: SUM_ONE LatWeights of the grid
    :return: float
    """
    _check_pair(pred, truth, weights)
    errors = pred.values - truth.values
    return _finite(fsum_array(weights.cell_weights() * errors * errors),
                   "weighted squared error")


def weighted_rmse(pred, truth, weights):
    """
    sqrt(sum_cells w_cell * (pred - truth)^2) with sum_cells w_cell = 1.

    :raises SpecMismatch: when the fields or weights do not share a grid
    :raises InvalidData: when the reduction is not finite
    """
    return math.sqrt(weighted_mse(pred, truth, weights))


def weighted_mae(pred, truth, weights):
    """Latitude-weighted mean absolute error of one field."""
    _check_pair(pred, truth, weights)
    errors = np.abs(pred.values - truth.values)
    return _finite(fsum_array(weights.cell_weights() * errors),
                   "weighted absolute error")


def point_rmse(pairs):
    """
    Root mean squared error over (prediction, observation) pairs, every
    pair weighing the same.

    :param pairs: iterable of (pred, obs) numbers
    :raises EmptyInput: for an empty list
    """
    pairs = np.asarray(list(pairs), dtype=np.float64)
    if pairs.size == 0:
        raise EmptyInput("point_rmse needs at least one pair")
    pairs = pairs.reshape(-1, 2)
    if not np.all(np.isfinite(pairs)):
        raise InvalidData("pairs must be finite")
    errors = pairs[:, 0] - pairs[:, 1]
    return math.sqrt(fsum_array(errors * errors) / errors.size)


def crps_decomposition(members, obs, variant=CrpsVariant.STANDARD_ABSOLUTE):
    """
    Skill and spread terms of the ensemble CRPS, element-wise.

    With d(u) = |u| (STANDARD_ABSOLUTE) or u^2 (PAPER_SQUARED):
    skill = (1/N) sum_i d(x_i - y), spread = (1/(2N^2)) sum_ij d(x_i - x_j).

    :param members: array of shape (N, ...)
    :param obs: array broadcastable to members.shape[1:]
    :param variant: CrpsVariant
    :return: (skill, spread) arrays of shape members.shape[1:]
    :raises EmptyEnsemble: when N == 0
    """
    variant = CrpsVariant.parse(variant)
    members = np.asarray(members, dtype=np.float64)
    obs = np.asarray(obs, dtype=np.float64)
    if members.ndim == 0 or members.shape[0] == 0:
        raise EmptyEnsemble("CRPS needs at least one member")
    if not (np.all(np.isfinite(members)) and np.all(np.isfinite(obs))):
        raise InvalidData("members and observation must be finite")

    if variant is CrpsVariant.STANDARD_ABSOLUTE:
        def distance(u):
            return np.abs(u)
    else:
        def distance(u):
            return u * u

    n = members.shape[0]
    skill = np.mean(distance(members - obs), axis=0)
    # identical members give exact zeros
    spread = np.zeros(members.shape[1:])
    for i in range(n):
        spread = spread + np.sum(distance(members[i] - members), axis=0)
    spread = spread / (2.0 * n * n)
    return skill, spread


def crps_values(members, obs, variant=CrpsVariant.STANDARD_ABSOLUTE):
    """Element-wise CRPS, skill minus spread."""
    variant = CrpsVariant.parse(variant)
    skill, spread = crps_decomposition(members, obs, variant)
    crps = skill - spread
    if variant is CrpsVariant.STANDARD_ABSOLUTE:
        # non-negative in exact arithmetic; drop rounding below zero
        crps = np.maximum(crps, 0.0)
    else:
        # cancellation residue within ROUNDING_ULPS ulp of skill is zero
        residue = (crps < 0.0) & (-crps <= ROUNDING_ULPS * EPS * skill)
        crps = np.where(residue, 0.0, crps)
    return crps


def crps_pointwise(members, obs, variant=CrpsVariant.STANDARD_ABSOLUTE):
    """
    CRPS of an N-member ensemble against a single observation.

    :param members: sequence of N floats
    :param obs: float
    :return: float
    """
    members = np.asarray(members, dtype=np.float64).reshape(-1)
    return float(crps_values(members, float(obs), variant))


def _member_array(members, truth=None):
    members = list(members)
    if not members:
        raise EmptyEnsemble("ensemble has no members")
    first = members[0]
    for member in members[1:]:
        first.same_grid(member)
        if member.valid_time != first.valid_time:
            raise SpecMismatch("members are valid at different times")
    if truth is not None:
        first.same_grid(truth)
        if truth.valid_time != first.valid_time:
            raise SpecMismatch("members and truth are valid at different "
                               "times")
    return np.stack([member.values for member in members])


def crps_field(members, truth, weights,
               variant=CrpsVariant.STANDARD_ABSOLUTE):
    """
    CRPS at every cell over the members, then the latitude-weighted mean.

    :param members: sequence of GridFields of one variable, one per member
    :param truth: reference GridField
    :param weights: SUM_ONE LatWeights
    :raises SpecMismatch: when a member does not share the truth's grid
    """
    stacked = _member_array(members, truth)
    weights.check(truth.spec, WeightMode.SUM_ONE)
    per_cell = crps_values(stacked, truth.values, variant)
    return _finite(fsum_array(weights.cell_weights() * per_cell), "CRPS")


def _stack_array(stack):
    if isinstance(stack, FieldStack):
        return stack.as_array()
    if isinstance(stack, GridField):
        return stack.values[None]
    return np.asarray(stack, dtype=np.float64)


def training_loss(pred, truth, weights):
    """
    (1 / (C*H*W)) * sum_c sum_i sum_j w_i * |pred - truth|.

    :param pred: FieldStack or C x H x W array
    :param truth: FieldStack or C x H x W array
    :param weights: MEAN_ONE LatWeights
    :raises SpecMismatch: on shape mismatch
    """
    if isinstance(pred, FieldStack) and isinstance(truth, FieldStack):
        pred.same_grid(truth)
    pred, truth = _stack_array(pred), _stack_array(truth)
    if pred.shape != truth.shape or pred.ndim != 3:
        raise SpecMismatch("loss needs two C x H x W stacks, got {} and {}"
                           .format(pred.shape, truth.shape))
    _, n_lat, n_lon = pred.shape
    if weights.mode is not WeightMode.MEAN_ONE:
        raise SpecMismatch("training loss uses MEAN_ONE weights")
    if weights.H != n_lat or weights.n_lon != n_lon:
        raise SpecMismatch("weights do not match a {}x{} grid".format(
            n_lat, n_lon))
    weighted = weights.values[None, :, None] * np.abs(pred - truth)
    return _finite(fsum_array(weighted) / pred.size, "training loss")


def ensemble_mean(members):
    """
    Element-wise mean of the member fields, flagged as derived.

    :param members: sequence of GridFields of one variable
    :raises EmptyEnsemble: for zero members
    """
    members = list(members)
    stacked = _member_array(members)
    return members[0].with_values(np.mean(stacked, axis=0), derived=True)
