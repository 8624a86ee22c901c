"""
Run configuration of the command line.

Values come from the dataclass defaults, then from an optional JSON file,
then from explicit command-line flags; later sources win.
"""
import json
from dataclasses import asdict, dataclass, field, fields
from datetime import date, datetime, time, timedelta, timezone
from pathlib import Path

from deepverif.ensemble.ensemble import PerturbationConfig
from deepverif.grid.interpolation import Interp
from deepverif.metrics.scores import CrpsVariant
from deepverif.variables import VARIABLES

MAX_LEAD = 480
REFERENCES = ("grid", "stations")
SCORE_METRICS = ("rmse", "mae")
MODELS = ("persistence", "climatology", "toy")


def _amplitude(value):
    """A float, or a JSON object mapping variables to floats."""
    try:
        return float(value)
    except ValueError:
        payload = json.loads(value)
        if not isinstance(payload, dict):
            raise ValueError("amplitude must be a number or a JSON object")
        return payload


def _flag(help_text, **kwargs):
    return dict(help=help_text, **kwargs)


@dataclass
class RunConfig:
    """
    Every setting of a deepverif run. The field metadata describes the
    matching command-line flag.
    """
    schedule: list = field(
        default_factory=lambda: ["00:00", "12:00"],
        metadata=_flag("init times of day (UTC, HH:MM)", nargs="+"))
    start_date: str = field(
        default=None, metadata=_flag("first init date, YYYY-MM-DD"))
    end_date: str = field(
        default=None, metadata=_flag("last init date (inclusive)"))
    lead_start: int = field(default=0, metadata=_flag("first lead (h)",
                                                      type=int))
    lead_end: int = field(default=240, metadata=_flag("last lead (h)",
                                                      type=int))
    lead_stride: int = field(default=6, metadata=_flag("lead stride (h)",
                                                       type=int))
    variables: list = field(default_factory=lambda: ["t2m"],
                            metadata=_flag("variable ids", nargs="+"))
    forecast_dir: str = field(default=None,
                              metadata=_flag("forecast GFD directory"))
    reference: str = field(default="grid",
                           metadata=_flag("truth source",
                                          choices=REFERENCES))
    truth_dir: str = field(default=None,
                           metadata=_flag("gridded truth GFD directory"))
    station_file: str = field(default=None,
                              metadata=_flag("station observation CSV"))
    metrics: list = field(default_factory=lambda: ["rmse"],
                          metadata=_flag("deterministic metrics", nargs="+"))
    crps_variant: str = field(
        default=CrpsVariant.STANDARD_ABSOLUTE.value,
        metadata=_flag("CRPS estimator",
                       choices=[v.value for v in CrpsVariant]))
    interp: str = field(default=Interp.NEAREST.value,
                        metadata=_flag("station extraction method",
                                       choices=[m.value for m in Interp]))
    periodic_lon: bool = field(
        default=False,
        metadata=_flag("wrap across the longitude seam",
                       action="store_true"))
    out: str = field(default="out", metadata=_flag("output directory"))
    threads: int = field(default=1, metadata=_flag("worker threads",
                                                   type=int))
    seed: int = field(default=0, metadata=_flag("perturbation seed",
                                                type=int))
    model: str = field(default="persistence",
                       metadata=_flag("forecaster", choices=MODELS))
    model_params: str = field(default=None,
                              metadata=_flag("toy parameters JSON"))
    ic_dir: str = field(default=None,
                        metadata=_flag("initial-condition GFD directory, "
                                       "defaults to truth_dir"))
    history_spacing: int = field(default=6, metadata=_flag(
        "hours between consecutive history states", type=int))
    n_members: int = field(default=10, metadata=_flag("ensemble size",
                                                      type=int))
    amplitude: object = field(default=1.0, metadata=_flag(
        "perturbation std, number or JSON object per variable",
        type=_amplitude))
    correlation_length: int = field(default=4, metadata=_flag(
        "perturbation box width in cells", type=int))
    rollout_step: int = field(default=None, metadata=_flag(
        "rollout step (h), direct prediction when unset", type=int))
    write_members: bool = field(default=False, metadata=_flag(
        "write member fields as GFD files", action="store_true"))
    learning_rate: float = field(default=1e-3, metadata=_flag(
        "base learning rate", type=float))
    epochs: int = field(default=100, metadata=_flag("training epochs",
                                                    type=int))
    tensorboard_dir: str = field(default=None, metadata=_flag(
        "log training curves to this directory"))
    region: str = field(default="global", metadata=_flag("region tag"))

    @classmethod
    def field_names(cls):
        return tuple(f.name for f in fields(cls))

    @classmethod
    def from_dict(cls, payload):
        unknown = sorted(set(payload) - set(cls.field_names()))
        if unknown:
            raise ValueError("unknown config keys: {}".format(
                ", ".join(unknown)))
        return cls(**payload)

    def to_dict(self):
        return asdict(self)

    def merge(self, overrides):
        """
        Returns a copy with the given fields replaced; None values are
        ignored.
        """
        payload = self.to_dict()
        payload.update({k: v for k, v in overrides.items() if v is not None})
        return type(self).from_dict(payload)

    def validate(self):
        """
        :return: self
        :raises ValueError: naming the first offending field
        """
        for moment in self.schedule:
            parse_time_of_day(moment)
        if not 0 <= self.lead_start <= self.lead_end <= MAX_LEAD:
            raise ValueError("lead_start/lead_end must satisfy 0 <= start "
                             "<= end <= {}".format(MAX_LEAD))
        if self.lead_stride < 1:
            raise ValueError("lead_stride must be >= 1")
        if not self.variables:
            raise ValueError("variables must not be empty")
        unknown = [v for v in self.variables if v not in VARIABLES]
        if unknown:
            raise ValueError("variables: unknown ids {}".format(unknown))
        if self.reference not in REFERENCES:
            raise ValueError("reference must be one of {}".format(
                REFERENCES))
        bad = [m for m in self.metrics if m not in SCORE_METRICS]
        if bad:
            raise ValueError("metrics: unsupported {}".format(bad))
        CrpsVariant.parse(self.crps_variant)
        Interp.parse(self.interp)
        if self.model not in MODELS:
            raise ValueError("model must be one of {}".format(MODELS))
        if self.threads < 1:
            raise ValueError("threads must be >= 1")
        if self.history_spacing < 1:
            raise ValueError("history_spacing must be >= 1")
        if self.rollout_step is not None and self.rollout_step < 1:
            raise ValueError("rollout_step must be >= 1")
        if self.epochs < 0:
            raise ValueError("epochs must be >= 0")
        if not self.learning_rate > 0.0:
            raise ValueError("learning_rate must be positive")
        self.perturbation()
        for name in ("start_date", "end_date"):
            value = getattr(self, name)
            if value is not None:
                date.fromisoformat(str(value))
        return self

    def leads(self):
        return list(range(self.lead_start, self.lead_end + 1,
                          self.lead_stride))

    def init_times(self):
        """
        Every schedule time on every date from start_date to end_date.

        :return: sorted list of UTC datetimes, empty when end < start
        :raises ValueError: when either date is unset
        """
        if self.start_date is None or self.end_date is None:
            raise ValueError("start_date and end_date are required")
        start = date.fromisoformat(str(self.start_date))
        end = date.fromisoformat(str(self.end_date))
        times = sorted({parse_time_of_day(t) for t in self.schedule})
        moments = []
        day = start
        while day <= end:
            moments.extend(datetime.combine(day, t, tzinfo=timezone.utc)
                           for t in times)
            day += timedelta(days=1)
        return moments

    def perturbation(self):
        return PerturbationConfig(self.amplitude, self.correlation_length,
                                  self.seed, self.n_members)

    @property
    def ic_source(self):
        return self.ic_dir if self.ic_dir is not None else self.truth_dir


def parse_time_of_day(value):
    """'HH:MM' -> datetime.time; ValueError for anything else."""
    try:
        parsed = datetime.strptime(str(value), "%H:%M")
    except ValueError:
        raise ValueError("schedule: invalid UTC time {!r}".format(
            value)) from None
    return time(parsed.hour, parsed.minute)


def load_config(path=None, overrides=None):
    """
    Merges defaults, the JSON file at path and the flag overrides.

    :return: validated RunConfig
    """
    config = RunConfig()
    if path is not None:
        payload = json.loads(Path(path).read_text(encoding="utf-8"))
        if not isinstance(payload, dict):
            raise ValueError("{}: config must be a JSON object".format(path))
        config = config.merge(payload)
    return config.merge(overrides or {}).validate()
