import math
from collections.abc import Mapping
from dataclasses import dataclass, field

from deepverif.exceptions import EmptyEnsemble, SpecMismatch
from deepverif.metrics.scores import ensemble_mean


@dataclass(frozen=True, eq=False)
class PerturbationConfig:
    """
    How initial conditions are perturbed.

    :param amplitude: standard deviation of the noise in canonical units,
        either one float for every variable or a mapping variable -> float;
        variables missing from a mapping are not perturbed
    :param correlation_length: width in grid cells of the box filter that
        smooths the noise, 0 or 1 for white noise
    :param seed: base seed of every member's random stream
    :param n_members: ensemble size including the control member 0
    """
    amplitude: object = 1.0
    correlation_length: int = 4
    seed: int = 0
    n_members: int = 10
    _amplitudes: dict = field(init=False, repr=False)

    def __post_init__(self):
        if isinstance(self.amplitude, Mapping):
            amplitudes = {str(k): float(v)
                          for k, v in self.amplitude.items()}
        else:
            amplitudes = {None: float(self.amplitude)}
        for value in amplitudes.values():
            if not math.isfinite(value) or value < 0.0:
                raise ValueError("amplitudes must be finite and >= 0")
        object.__setattr__(self, "_amplitudes", amplitudes)
        if int(self.correlation_length) != self.correlation_length \
                or self.correlation_length < 0:
            raise ValueError("correlation_length must be an integer >= 0")
        if int(self.n_members) != self.n_members or self.n_members < 1:
            raise ValueError("n_members must be an integer >= 1")
        object.__setattr__(self, "correlation_length",
                           int(self.correlation_length))
        object.__setattr__(self, "n_members", int(self.n_members))
        object.__setattr__(self, "seed", int(self.seed))

    def amplitude_of(self, variable):
        if None in self._amplitudes:
            return self._amplitudes[None]
        return self._amplitudes.get(variable, 0.0)

    def to_dict(self):
        amplitude = self._amplitudes.get(None)
        if amplitude is None:
            amplitude = dict(sorted(self._amplitudes.items()))
        return {
            "amplitude": amplitude,
            "correlation_length": self.correlation_length,
            "seed": self.seed,
            "n_members": self.n_members,
        }


@dataclass(frozen=True, eq=False)
class Ensemble:
    """
    N member states valid at the same time. Member 0 is the unperturbed
    control by convention.

    :param members: tuple of FieldStacks sharing spec, variables, init and
        lead time
    :param perturbation_seed: seed the members were generated with
    :param member_ids: member index of every stack, defaults to 0..N-1
    """
    members: tuple
    perturbation_seed: int = 0
    member_ids: tuple = None

    def __post_init__(self):
        members = tuple(self.members)
        if not members:
            raise EmptyEnsemble("an ensemble needs at least one member")
        first = members[0]
        for member in members[1:]:
            first.same_grid(member)
            if (member.init_time != first.init_time
                    or member.lead_time != first.lead_time):
                raise SpecMismatch("members differ in init or lead time")
        ids = self.member_ids
        ids = tuple(range(len(members))) if ids is None else tuple(ids)
        if len(ids) != len(members):
            raise ValueError("one member id is needed per member")
        object.__setattr__(self, "members", members)
        object.__setattr__(self, "member_ids", ids)

    def __len__(self):
        return len(self.members)

    def __getitem__(self, variable):
        """Member fields of one variable, in member order."""
        return tuple(member[variable] for member in self.members)

    @property
    def n_members(self):
        return len(self.members)

    @property
    def spec(self):
        return self.members[0].spec

    @property
    def variables(self):
        return self.members[0].variables

    @property
    def init_time(self):
        return self.members[0].init_time

    @property
    def lead_time(self):
        return self.members[0].lead_time

    @property
    def valid_time(self):
        return self.members[0].valid_time

    def mean(self, variable):
        return ensemble_mean(self[variable])
