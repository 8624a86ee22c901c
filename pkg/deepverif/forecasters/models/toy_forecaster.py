import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from deepverif.exceptions import FormatError, UnsupportedVariable
from deepverif.forecasters.models.climatology_forecaster import \
    ClimatologyForecaster
from deepverif.grid.gfd import read_gfd, write_gfd
from deepverif.grid.grid_field import FieldStack

# column order of the coefficient matrices used by training
COEFFICIENTS = ("a", "b", "lambda", "c")


@dataclass(frozen=True)
class ToyCoefficients:
    """
    Coefficients of one variable: persistence weight a, tendency weight b,
    lead-conditioning decay lam >= 0 and bias c.
    """
    a: float = 1.0
    b: float = 0.0
    lam: float = 0.0
    c: float = 0.0

    def __post_init__(self):
        for name in ("a", "b", "lam", "c"):
            value = float(getattr(self, name))
            if not math.isfinite(value):
                raise ValueError("coefficient {} must be finite".format(name))
            object.__setattr__(self, name, value)
        if self.lam < 0.0:
            raise ValueError("decay lambda must be >= 0")

    def as_tuple(self):
        return self.a, self.b, self.lam, self.c


@dataclass(frozen=True)
class ToyModelParams:
    """
    Per-variable ToyCoefficients keyed by variable id.
    """
    coefficients: dict = field(default_factory=dict)

    @classmethod
    def persistence(cls, variables):
        """Parameters that reduce the toy model to persistence."""
        return cls({variable: ToyCoefficients() for variable in variables})

    @property
    def variables(self):
        return tuple(self.coefficients)

    def __getitem__(self, variable):
        try:
            return self.coefficients[variable]
        except KeyError:
            raise UnsupportedVariable("no toy coefficients for {!r}".format(
                variable)) from None

    def as_matrix(self, variables):
        """C x 4 array of (a, b, lambda, c) in the given channel order."""
        return np.array([self[v].as_tuple() for v in variables],
                        dtype=np.float64)

    @classmethod
    def from_matrix(cls, variables, matrix):
        return cls({
            variable: ToyCoefficients(*row)
            for variable, row in zip(variables, np.asarray(matrix))
        })

    def to_dict(self):
        return {
            variable: dict(zip(COEFFICIENTS, coefficients.as_tuple()))
            for variable, coefficients in sorted(self.coefficients.items())
        }

    @classmethod
    def from_dict(cls, payload):
        try:
            return cls({
                variable: ToyCoefficients(entry["a"], entry["b"],
                                          entry["lambda"], entry["c"])
                for variable, entry in payload.items()
            })
        except (KeyError, TypeError, ValueError) as error:
            raise FormatError("invalid toy parameters: {}".format(
                error)) from error


def toy_predict_array(matrix, current, previous, climatology, lead):
    """
    c + e * (a * X_t + b * (X_t - X_t-1)) + (1 - e) * climatology with
    e = exp(-lambda * lead), channel by channel.

    :param matrix: C x 4 coefficients
    :param current: C x H x W newest state X_t
    :param previous: C x H x W state X_t-1
    :param climatology: C x H x W
    :param lead: hours
    :return: C x H x W prediction
    """
    a, b, lam, c = (matrix[:, k, None, None] for k in range(4))
    decay = np.exp(-lam * float(lead))
    return (c + decay * (a * current + b * (current - previous))
            + (1.0 - decay) * climatology)


class ToyForecaster(ClimatologyForecaster):
    """
    Exponential relaxation to climatology, conditioned continuously on the
    lead time. Consumes the two newest states.

    :param params: ToyModelParams
    :param climatology: FieldStack of per-cell means
    """
    name = "toy"
    history_length = 2

    def __init__(self, params, climatology):
        super().__init__(climatology)
        self.params = params
        self.variables = tuple(v for v in climatology.variables
                               if v in params.coefficients)

    def forecast(self, history, lead):
        current, previous = history[0], history[1]
        variables = current.variables
        return toy_predict_array(
            self.params.as_matrix(variables), current.as_array(),
            previous.as_array(),
            self.climatology_array(current.spec, variables), lead)


def save_toy_model(model, path):
    """
    Writes the parameters JSON and one climatology GFD file per variable
    next to it.

    GFD stores float32, so a reloaded model sees the climatology rounded
    to single precision and its predictions can differ from the saved
    model by about 1e-5 K. Coefficients round-trip exactly through JSON.

    :return: Path of the JSON file
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    payload = model.params.to_dict()
    for variable in payload:
        name = "climatology_{}.gfd".format(variable)
        write_gfd(model.climatology[variable], path.parent / name)
        payload[variable]["climatology"] = name
    path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n",
                    encoding="utf-8")
    return path


def load_toy_model(path):
    """
    Reads a ToyForecaster written by save_toy_model.

    :raises FormatError: on a malformed file
    """
    path = Path(path)
    try:
        payload = json.loads(path.read_text(encoding="utf-8"))
        fields = [read_gfd(path.parent / entry["climatology"])
                  for entry in payload.values()]
    except (KeyError, TypeError, AttributeError,
            json.JSONDecodeError) as error:
        raise FormatError("{}: {}".format(path, error)) from error
    return ToyForecaster(ToyModelParams.from_dict(payload),
                         FieldStack(tuple(fields)))
