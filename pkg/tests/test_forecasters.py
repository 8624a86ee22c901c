from datetime import timedelta

import numpy as np
import pytest

from deepverif.exceptions import (InsufficientHistory, InvalidStep,
                                  UnsupportedVariable)
from deepverif.forecasters import (ClimatologyForecaster, ForecastRequest,
                                   PersistenceForecaster, ToyCoefficients,
                                   ToyForecaster, ToyModelParams)
from deepverif.forecasters.models import load_toy_model, save_toy_model
from deepverif.forecasters.models.climatology_forecaster import \
    climatology_from_states
from deepverif.forecasters.models.toy_forecaster import toy_predict_array

VARIABLES = ("t2m", "sp")


@pytest.fixture
def history(spec, analysis, init_time):
    rng = np.random.default_rng(3)
    newest = analysis(spec, [rng.normal(280.0, 3.0, spec.shape),
                             rng.normal(1000.0, 5.0, spec.shape)],
                      init_time, VARIABLES)
    older = analysis(spec, [rng.normal(280.0, 3.0, spec.shape),
                            rng.normal(1000.0, 5.0, spec.shape)],
                     init_time - timedelta(hours=6), VARIABLES)
    return newest, older


@pytest.fixture
def climatology(spec, analysis, init_time):
    states = [analysis(spec, [280.0 + k, 1000.0 + k],
                       init_time + timedelta(hours=6 * k), VARIABLES)
              for k in range(4)]
    return climatology_from_states(states)


def _toy(climatology, **coefficients):
    params = ToyModelParams({v: ToyCoefficients(**coefficients)
                             for v in VARIABLES})
    return ToyForecaster(params, climatology)


def test_persistence_returns_the_newest_state(history, init_time):
    newest, _ = history
    out = PersistenceForecaster().predict(ForecastRequest(history, 24))
    assert np.array_equal(out.as_array(), newest.as_array())
    assert out.init_time == init_time
    assert out.lead_time == 24
    assert out.valid_time == init_time + timedelta(hours=24)


def test_default_toy_model_is_persistence(history, climatology):
    newest, _ = history
    out = _toy(climatology).predict(ForecastRequest(history, 12))
    assert np.array_equal(out.as_array(), newest.as_array())


def test_strong_decay_relaxes_to_climatology(history, climatology):
    out = _toy(climatology, lam=50.0).predict(ForecastRequest(history, 1))
    assert np.allclose(out.as_array(), climatology.as_array(), rtol=0.0,
                       atol=1e-10)


def test_climatology_forecaster(history, climatology):
    out = ClimatologyForecaster(climatology).predict(
        ForecastRequest(history[:1], 6))
    assert np.array_equal(out["t2m"].values, np.full((4, 8), 281.5))
    assert out.variables == VARIABLES


def test_persistence_rollout(history):
    model = PersistenceForecaster()
    request = ForecastRequest(history, 24)
    out = model.rollout(request, 6)
    assert np.array_equal(out.as_array(), history[0].as_array())
    assert out.lead_time == 24


def test_toy_rollout_composes_steps(scalar_spec, analysis, init_time):
    states = (analysis(scalar_spec, 8.0, init_time),
              analysis(scalar_spec, 8.0, init_time - timedelta(hours=1)))
    model = ToyForecaster(
        ToyModelParams({"t2m": ToyCoefficients(a=0.5)}),
        climatology_from_states(states))
    out = model.rollout(ForecastRequest(states, 3), 1)
    assert out["t2m"].values[0, 0] == 1.0
    assert out.lead_time == 3


def test_rollout_with_a_single_step_equals_predict(history, climatology):
    model = _toy(climatology, a=0.9, b=0.2, lam=0.01, c=0.1)
    request = ForecastRequest(history, 18)
    assert np.array_equal(model.rollout(request, 18).as_array(),
                          model.predict(request).as_array())


def test_rollout_step_must_divide_the_lead(history):
    with pytest.raises(InvalidStep):
        PersistenceForecaster().rollout(ForecastRequest(history, 24), 7)
    with pytest.raises(InvalidStep):
        PersistenceForecaster().rollout(ForecastRequest(history, 24), 0)


def test_requests_are_checked(history, climatology, spec, analysis,
                              init_time):
    toy = _toy(climatology)
    with pytest.raises(InsufficientHistory):
        toy.predict(ForecastRequest(history[:1], 6))
    foreign = (analysis(spec, 5.0, init_time, ("ws10",)),
               analysis(spec, 5.0, init_time - timedelta(hours=6),
                        ("ws10",)))
    with pytest.raises(UnsupportedVariable):
        toy.predict(ForecastRequest(foreign, 6))
    with pytest.raises(ValueError):
        ForecastRequest(history, 0)
    with pytest.raises(ValueError):
        ForecastRequest(history[::-1], 6)


def test_output_is_continuous_in_the_lead(history, climatology):
    model = _toy(climatology, a=0.95, b=0.3, lam=0.02, c=0.0)
    leads = np.arange(1, 121)
    outputs = [model.predict(ForecastRequest(history, int(lead))).as_array()
               for lead in leads]
    jumps = [np.max(np.abs(later - earlier))
             for earlier, later in zip(outputs, outputs[1:])]
    # one hour never moves a cell by more than the derivative bound
    bound = 0.02 * np.max(np.abs(history[0].as_array())) * 2.0
    assert max(jumps) < bound


def test_coefficients_are_validated():
    with pytest.raises(ValueError):
        ToyCoefficients(lam=-0.1)
    with pytest.raises(ValueError):
        ToyCoefficients(a=float("nan"))


def test_saved_toy_model_loads_again(tmp_path, history, climatology):
    model = _toy(climatology, a=0.9, b=0.1, lam=0.05, c=-0.2)
    path = save_toy_model(model, tmp_path / "toy_params.json")
    assert (tmp_path / "climatology_t2m.gfd").exists()
    restored = load_toy_model(path)
    assert restored.params == model.params
    request = ForecastRequest(history, 12)
    assert np.allclose(restored.predict(request).as_array(),
                       model.predict(request).as_array(), atol=1e-3)


def test_toy_prediction_is_continuous_at_fractional_leads():
    rng = np.random.default_rng(5)
    eps = 1e-6
    for _ in range(200):
        matrix = np.array([[rng.uniform(0.5, 1.5), rng.uniform(-0.5, 0.5),
                            rng.uniform(0.0, 0.05), rng.uniform(-1.0, 1.0)]])
        current = rng.normal(280.0, 10.0, (1, 1, 1))
        previous = current + rng.normal(0.0, 1.0, (1, 1, 1))
        climatology = rng.normal(280.0, 5.0, (1, 1, 1))
        lead = float(rng.uniform(0.0, 240.0))
        here = toy_predict_array(matrix, current, previous, climatology,
                                 lead)
        there = toy_predict_array(matrix, current, previous, climatology,
                                  lead + eps)
        step = abs((there - here).item())
        assert step < 1e-4
        further = toy_predict_array(matrix, current, previous, climatology,
                                    lead + 1e3 * eps)
        assert step < abs((further - here).item()) + 1e-12


def test_saved_climatology_is_single_precision(tmp_path, climatology):
    model = _toy(climatology, a=0.9)
    restored = load_toy_model(save_toy_model(model, tmp_path / "toy.json"))
    for variable in VARIABLES:
        saved = model.climatology[variable].values
        assert np.array_equal(restored.climatology[variable].values,
                              saved.astype(np.float32).astype(np.float64))
