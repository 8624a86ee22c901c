import numpy as np
import pytest

from deepverif.exceptions import MissingStep, SpecMismatch
from deepverif.grid.accumulation import accumulate, accumulate_series


def _hourly(make_field, spec, leads, value=1.0, variable="ssrd"):
    return [make_field(spec, value, variable, lead_time=lead)
            for lead in leads]


def test_six_hourly_sum_of_constant_fields(make_field, spec):
    fields = _hourly(make_field, spec, range(1, 7))
    total = accumulate(fields, 6, variable="ssrd6h")
    assert np.array_equal(total.values, np.full(spec.shape, 6.0))
    assert total.variable == "ssrd6h"
    assert total.lead_time == 6


def test_only_the_last_window_is_summed(make_field, spec):
    fields = [make_field(spec, float(lead), "ssrd", lead_time=lead)
              for lead in range(0, 13)]
    total = accumulate(reversed(fields), 6)
    assert total.lead_time == 12
    assert total.values[0, 0] == sum(range(7, 13))


def test_gaps_and_short_runs_raise(make_field, spec):
    with pytest.raises(MissingStep):
        accumulate(_hourly(make_field, spec, [1, 2, 3, 5, 6, 7]), 6)
    with pytest.raises(MissingStep):
        accumulate(_hourly(make_field, spec, range(1, 6)), 6)
    with pytest.raises(MissingStep):
        accumulate([], 6)


def test_inconsistent_runs_raise(make_field, spec):
    fields = _hourly(make_field, spec, range(1, 7))
    with pytest.raises(SpecMismatch):
        accumulate(fields[:-1] + [make_field(spec, 1.0, "t2m",
                                             lead_time=6)], 6)
    with pytest.raises(SpecMismatch):
        accumulate(fields + [fields[-1]], 6)


def test_series_covers_every_full_window(make_field, spec):
    fields = _hourly(make_field, spec, range(0, 13))
    series = accumulate_series(fields, 6, "ssrd6h")
    assert sorted(series) == list(range(5, 13))
    assert all(np.all(f.values == 6.0) for f in series.values())


def test_accumulation_is_linear(make_field, spec):
    rng = np.random.default_rng(6)
    a = [rng.uniform(0.0, 3.6e6, spec.shape) for _ in range(6)]
    b = [rng.uniform(0.0, 3.6e6, spec.shape) for _ in range(6)]

    def total(values):
        return accumulate([make_field(spec, v, "ssrd", lead_time=lead)
                           for lead, v in enumerate(values, start=1)],
                          6).values

    summed = total([x + y for x, y in zip(a, b)])
    assert np.allclose(summed, total(a) + total(b), rtol=1e-12, atol=0.0)
