from collections import defaultdict

from deepverif.exceptions import EmptyInput
from deepverif.metrics.accumulator import fsum_array
from deepverif.metrics.score_table import ScoreAccumulator

REFERENCE = "stations"


def station_contributions(pairs, metric="rmse", region="global"):
    """
    Pooled-error contributions of matched pairs, one per
    (variable, lead_time) group, for a ScoreAccumulator.

    rmse contributes the sum of squared errors, mae the sum of absolute
    errors; both with weight equal to the number of pairs.
    """
    groups = defaultdict(list)
    for pair in pairs:
        groups[(pair.record.variable, pair.lead_time)].append(pair.error)
    contributions = []
    for (variable, lead), errors in sorted(groups.items()):
        if metric == "rmse":
            total = fsum_array([e * e for e in errors])
        elif metric == "mae":
            total = fsum_array([abs(e) for e in errors])
        else:
            raise ValueError("unsupported station metric {!r}".format(metric))
        contributions.append((variable, lead, metric, REFERENCE, total,
                              len(errors), len(errors), region))
    return contributions


def score_stations(pairs, metrics=("rmse",), region="global",
                   metadata=None):
    """
    Point scores of matched pairs grouped by variable and lead time.

    Every station weighs the same. The RMSE of a group equals point_rmse of
    that group's pairs.

    :param pairs: sequence of MatchedPairs
    :return: ScoreTable with reference "stations"
    :raises EmptyInput: when there are no pairs
    """
    pairs = list(pairs)
    if not pairs:
        raise EmptyInput("no matched pairs to score")
    pooled = ScoreAccumulator()
    for metric in metrics:
        pooled.update(station_contributions(pairs, metric, region))
    return pooled.finalize(metadata)
