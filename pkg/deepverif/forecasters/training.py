"""
Training of the toy forecaster on the latitude-weighted L1 objective.

The objective of one sample is
    (1 / (C*H*W)) * sum_c sum_i sum_j w_i * |pred_cij - truth_cij|
with MEAN_ONE weights w_i; the training loss is its mean over the dataset.
"""
import logging
import math
from collections import namedtuple

import numpy as np

from deepverif.exceptions import (EmptyInput, InsufficientHistory,
                                  NonSmoothPoint, SpecMismatch,
                                  TrainingDiverged)
from deepverif.forecasters.models.climatology_forecaster import \
    climatology_from_states
from deepverif.forecasters.models.toy_forecaster import (ToyModelParams,
                                                         toy_predict_array)
from deepverif.grid.weights import WeightMode
from deepverif.metrics.accumulator import fsum_array

logger = logging.getLogger(__name__)

LOSSES = ("l1", "l2")

GradientReport = namedtuple("GradientReport",
                            ["max_rel_error", "analytic", "numeric"])
GradientReport.__doc__ = """
Result of check_gradient: the largest relative difference between the
analytic and the central finite-difference gradient, and both C x 4
gradients in (a, b, lambda, c) column order.
"""


def climatology_from_dataset(dataset):
    """Per-cell mean of the dataset's truth states."""
    return climatology_from_states(truth for _, truth in dataset)


class _Samples:
    """Dataset unpacked into arrays once, in dataset order."""

    def __init__(self, dataset, weights, climatology):
        dataset = list(dataset)
        if not dataset:
            raise EmptyInput("training needs at least one sample")
        first_request, _ = dataset[0]
        self.variables = first_request.variables
        spec = first_request.newest.spec
        weights.check(spec, WeightMode.MEAN_ONE)
        self.weights = weights.values[None, :, None]

        current, previous, truths, leads = [], [], [], []
        for request, truth in dataset:
            if len(request.history) < 2:
                raise InsufficientHistory("toy training needs two past "
                                          "states per sample")
            request.newest.same_grid(first_request.newest)
            request.newest.same_grid(truth)
            current.append(request.history[0].as_array())
            previous.append(request.history[1].as_array())
            truths.append(truth.as_array())
            leads.append(float(request.target_lead))
        self.current = np.stack(current)
        self.previous = np.stack(previous)
        self.truth = np.stack(truths)
        self.leads = np.array(leads)
        if climatology.spec != spec:
            raise SpecMismatch("climatology lives on a different grid")
        self.climatology = np.stack([climatology[v].values
                                     for v in self.variables])
        self.cells = self.current[0].size

    def __len__(self):
        return len(self.leads)

    def residuals(self, matrix, index):
        pred = toy_predict_array(matrix, self.current[index],
                                 self.previous[index], self.climatology,
                                 self.leads[index])
        return pred - self.truth[index]

    def loss(self, matrix, kind="l1"):
        totals = []
        for index in range(len(self)):
            residual = self.residuals(matrix, index)
            penalty = np.abs(residual) if kind == "l1" else residual ** 2
            totals.append(fsum_array(self.weights * penalty) / self.cells)
        return math.fsum(totals) / len(self)

    def gradient(self, matrix, kind="l1"):
        """
        Analytic (sub)gradient of loss() with respect to the C x 4 matrix.
        The L1 subgradient at a zero residual is zero.
        """
        a, b, lam = (matrix[:, k, None, None] for k in range(3))
        gradient = np.zeros_like(matrix)
        for index in range(len(self)):
            current = self.current[index]
            tendency = current - self.previous[index]
            lead = self.leads[index]
            residual = self.residuals(matrix, index)
            if kind == "l1":
                slope = np.sign(residual)
            else:
                slope = 2.0 * residual
            slope = slope * self.weights / self.cells
            decay = np.exp(-lam * lead)
            terms = (
                decay * current,
                decay * tendency,
                lead * decay * (self.climatology - a * current
                                - b * tendency),
                np.ones_like(current),
            )
            for k, term in enumerate(terms):
                gradient[:, k] += np.sum(slope * term, axis=(1, 2))
        return gradient / len(self)

    def near_kink(self, matrix, h=0.0):
        """
        True when some residual is zero, or close enough to zero that a
        coefficient change of size h could flip its sign.
        """
        a, b, lam = (matrix[:, k, None, None] for k in range(3))
        for index in range(len(self)):
            current = self.current[index]
            tendency = current - self.previous[index]
            lead = self.leads[index]
            decay = np.exp(-lam * lead)
            reach = np.maximum.reduce([
                np.abs(decay * current),
                np.abs(decay * tendency),
                np.abs(lead * decay * (self.climatology - a * current
                                       - b * tendency)),
                np.ones_like(current),
            ])
            if np.any(np.abs(self.residuals(matrix, index)) <= h * reach):
                return True
        return False


def _project(matrix):
    projected = matrix.copy()
    projected[:, 2] = np.maximum(projected[:, 2], 0.0)
    return projected


class ToyTrainer:
    """
    Subgradient descent on the training loss, one epoch per step().

    Every epoch starts from the base learning rate and halves it until the
    candidate does not increase the loss, so accepted steps never raise the
    training loss. The decay lambda is projected back to >= 0.

    The reset()/step() pair follows the environment convention, so the
    trainer can be decorated by wrappers such as TensorboardLogger.

    :param params: initial ToyModelParams, never mutated
    :param dataset: list of (ForecastRequest, truth FieldStack)
    :param weights: MEAN_ONE LatWeights
    :param learning_rate: base step size, > 0
    :param climatology: FieldStack, defaults to the mean of the truths
    :param max_halvings: halvings tried per epoch before giving up
    """
    def __init__(self, params, dataset, weights, learning_rate=1e-3,
                 climatology=None, max_halvings=30):
        dataset = list(dataset)
        if climatology is None and dataset:
            climatology = climatology_from_dataset(dataset)
        self.samples = _Samples(dataset, weights, climatology)
        self.climatology = climatology
        self.initial_params = params
        self.learning_rate = learning_rate
        self.max_halvings = int(max_halvings)
        self.reset()

    @property
    def learning_rate(self):
        """
        Base step size of every epoch.

        :return: float
        """
        return self._learning_rate

    @learning_rate.setter
    def learning_rate(self, value):
        value = float(value)
        if not value > 0.0:
            raise ValueError("learning rate must be positive")
        self._learning_rate = value

    @property
    def params(self):
        return ToyModelParams.from_matrix(self.samples.variables,
                                          self._matrix)

    @property
    def loss(self):
        return self._loss

    def reset(self):
        """
        Restores the initial parameters.

        :return: training loss at the initial parameters
        """
        self._matrix = self.initial_params.as_matrix(self.samples.variables)
        self._loss = self.samples.loss(self._matrix)
        self.initial_loss = self._loss
        self.epoch = 0
        return self._loss

    def step(self):
        """
        Runs one epoch.

        :return: (params, loss, done, info); done is True once no step of
            any tried size can decrease the loss further
        :raises TrainingDiverged: when every candidate loss was non-finite
        """
        gradient = self.samples.gradient(self._matrix)
        self.epoch += 1
        info = {"epoch": self.epoch, "learning_rate": 0.0, "halvings": 0,
                "accepted": False}
        if not np.any(gradient):
            return self.params, self._loss, True, info

        rate = self._learning_rate
        finite_seen = False
        for halving in range(self.max_halvings + 1):
            candidate = _project(self._matrix - rate * gradient)
            loss = self.samples.loss(candidate)
            if math.isfinite(loss):
                finite_seen = True
                if loss <= self._loss:
                    self._matrix, self._loss = candidate, loss
                    info.update(learning_rate=rate, halvings=halving,
                                accepted=True)
                    return self.params, self._loss, False, info
            rate /= 2.0

        if not finite_seen:
            raise TrainingDiverged("no finite loss after {} halvings".format(
                self.max_halvings))
        logger.info("epoch %d: no decrease after %d halvings, stopping",
                    self.epoch, self.max_halvings)
        info["halvings"] = self.max_halvings
        return self.params, self._loss, True, info

    def train(self, epochs):
        """
        Runs up to `epochs` epochs, stopping early once done.

        :return: ToyModelParams after training
        """
        for _ in range(int(epochs)):
            _, loss, done, info = self.step()
            logger.debug("epoch %d loss %.6g rate %.3g", info["epoch"], loss,
                         info["learning_rate"])
            if done:
                break
        logger.info("trained %d epochs: loss %.6g -> %.6g", self.epoch,
                    self.initial_loss, self._loss)
        return self.params


def train_toy(params, dataset, weights, learning_rate, epochs,
              climatology=None, max_halvings=30):
    """
    Fits ToyModelParams to a dataset with the latitude-weighted L1 loss.

    :param params: initial ToyModelParams
    :param dataset: list of (ForecastRequest, truth FieldStack)
    :param weights: MEAN_ONE LatWeights
    :param learning_rate: base step size, > 0
    :param epochs: maximum number of epochs
    :return: ToyModelParams whose training loss is <= the initial loss
    :raises TrainingDiverged: when no finite loss can be reached
    """
    trainer = ToyTrainer(params, dataset, weights, learning_rate,
                         climatology, max_halvings)
    return trainer.train(epochs)


def check_gradient(params, dataset, weights, h=1e-5, loss="l1",
                   climatology=None):
    """
    Compares the analytic gradient of the training loss against central
    finite differences with step h in every coefficient.

    :param loss: "l1" for the training objective, "l2" for its squared
        counterpart
    :return: GradientReport
    :raises NonSmoothPoint: for "l1" when a residual is zero or so close to
        zero that the finite differences would straddle the kink
    """
    if loss not in LOSSES:
        raise ValueError("loss must be one of {}".format(LOSSES))
    dataset = list(dataset)
    if climatology is None and dataset:
        climatology = climatology_from_dataset(dataset)
    samples = _Samples(dataset, weights, climatology)
    matrix = params.as_matrix(samples.variables)
    if loss == "l1" and samples.near_kink(matrix, h):
        raise NonSmoothPoint("a residual is zero or within one finite-"
                             "difference step of zero")

    analytic = samples.gradient(matrix, loss)
    numeric = np.zeros_like(matrix)
    for index in np.ndindex(matrix.shape):
        forward, backward = matrix.copy(), matrix.copy()
        forward[index] += h
        backward[index] -= h
        numeric[index] = (samples.loss(forward, loss)
                          - samples.loss(backward, loss)) / (2.0 * h)

    scale = np.maximum(np.maximum(np.abs(analytic), np.abs(numeric)), 1e-12)
    relative = np.abs(analytic - numeric) / scale
    return GradientReport(float(np.max(relative)), analytic, numeric)
