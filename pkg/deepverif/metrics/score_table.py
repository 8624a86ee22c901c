import json
import math
from collections import namedtuple
from pathlib import Path

import pandas as pd

from deepverif.exceptions import FormatError, InvalidData
from deepverif.metrics.accumulator import Accumulator

COLUMNS = ("variable", "lead_hours", "metric", "reference", "region",
           "score", "n_samples")
NON_NEGATIVE_METRICS = ("rmse", "rmse_ensmean", "crps", "mae")
# metrics pooled as mean squared errors and reported after a square root
ROOT_METRICS = ("rmse", "rmse_ensmean")

ScoreKey = namedtuple("ScoreKey",
                      ["variable", "lead_hours", "metric", "reference",
                       "region"])
ScoreEntry = namedtuple("ScoreEntry", ["score", "n_samples"])


class ScoreTable:
    """
    Scores keyed by (variable, lead_hours, metric, reference, region).

    Iteration, records and files are always in sorted key order, so two
    tables holding the same scores serialize to the same bytes.

    :param metadata: dict written to the sidecar JSON, e.g. the CRPS variant
        and the interpolation method used
    """
    def __init__(self, metadata=None):
        self._entries = {}
        self.metadata = dict(metadata or {})

    def add(self, variable, lead_hours, metric, reference, score, n_samples,
            region="global"):
        """
        Stores one score, replacing any previous entry with the same key.

        :raises InvalidData: for non-positive counts, non-finite scores or
            negative error scores
        """
        score = float(score)
        n_samples = int(n_samples)
        if n_samples <= 0:
            raise InvalidData("score entries need a positive sample count")
        if not math.isfinite(score):
            raise InvalidData("score for {} is not finite".format(metric))
        if metric in NON_NEGATIVE_METRICS and score < 0.0:
            raise InvalidData("{} cannot be negative".format(metric))
        key = ScoreKey(str(variable), int(lead_hours), str(metric),
                       str(reference), str(region))
        self._entries[key] = ScoreEntry(score, n_samples)
        return key

    def __len__(self):
        return len(self._entries)

    def __iter__(self):
        return iter(sorted(self._entries.items()))

    def __contains__(self, key):
        return ScoreKey(*key) in self._entries

    def __getitem__(self, key):
        return self._entries[ScoreKey(*key)]

    def get(self, variable, lead_hours, metric, reference="grid",
            region="global"):
        """Score of one key; KeyError when absent."""
        return self._entries[ScoreKey(variable, lead_hours, metric, reference,
                                      region)].score

    def merge(self, other):
        """Adds every entry of other to this table."""
        for key, entry in other:
            self._entries[key] = entry
        self.metadata.update(other.metadata)
        return self

    def series(self, variable, metric, reference, region="global"):
        """
        Scores of one (variable, metric, reference, region) by lead time.

        :return: dict lead_hours -> score, in lead order
        """
        return {
            key.lead_hours: entry.score
            for key, entry in self
            if (key.variable, key.metric, key.reference, key.region) ==
            (variable, metric, reference, region)
        }

    def groups(self):
        """Sorted distinct (variable, metric, reference, region) tuples."""
        return sorted({(key.variable, key.metric, key.reference, key.region)
                       for key in self._entries})

    def records(self):
        return [
            dict(zip(COLUMNS, tuple(key) + tuple(entry)))
            for key, entry in self
        ]

    def to_frame(self):
        return pd.DataFrame(self.records(), columns=list(COLUMNS))

    def write_csv(self, path):
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        self.to_frame().to_csv(path, index=False, lineterminator="\n")
        return path

    def write_json(self, path):
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(json.dumps(self.records(), indent=2) + "\n",
                        encoding="utf-8")
        return path

    def write_metadata(self, path):
        return write_sidecar(path, self.metadata)

    def write(self, out_dir, stem="scores"):
        """
        Writes {stem}.csv, {stem}.json and metadata.json into out_dir.

        :return: list of paths written
        """
        out_dir = Path(out_dir)
        return [
            self.write_csv(out_dir / "{}.csv".format(stem)),
            self.write_json(out_dir / "{}.json".format(stem)),
            self.write_metadata(out_dir / "metadata.json"),
        ]

    @classmethod
    def from_frame(cls, frame, metadata=None):
        missing = [column for column in COLUMNS if column not in frame]
        if missing:
            raise FormatError("score table lacks columns {}".format(
                ", ".join(missing)))
        table = cls(metadata)
        for row in frame.itertuples(index=False):
            table.add(row.variable, row.lead_hours, row.metric,
                      row.reference, row.score, row.n_samples, row.region)
        return table

    @classmethod
    def read_csv(cls, path):
        frame = pd.read_csv(path, dtype={"variable": str, "metric": str,
                                         "reference": str, "region": str})
        return cls.from_frame(frame)

    @classmethod
    def read_json(cls, path):
        records = json.loads(Path(path).read_text(encoding="utf-8"))
        return cls.from_frame(pd.DataFrame(records, columns=list(COLUMNS)))

    @classmethod
    def read(cls, path):
        """Reads a score file by its suffix (.csv or .json)."""
        path = Path(path)
        if path.suffix.lower() == ".json":
            return cls.read_json(path)
        return cls.read_csv(path)


def write_sidecar(path, metadata):
    """Writes a metadata dict as sorted, indented JSON."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(metadata, indent=2, sort_keys=True) + "\n",
                    encoding="utf-8")
    return path


class ScoreAccumulator:
    """
    Pools score contributions over many init times before finalizing.

    Every contribution is a (total, weight, n_samples) triple. The final
    score is sum(total) / sum(weight), square-rooted for RMSE metrics, so
    errors are pooled before the root and never averaged as RMSEs.

    A grid field contributes its weighted mean squared error with weight 1;
    a list of station pairs contributes its sum of squared errors with
    weight equal to the number of pairs.
    """
    def __init__(self):
        self._totals = {}

    def add(self, variable, lead_hours, metric, reference, total, weight,
            n_samples, region="global"):
        key = ScoreKey(str(variable), int(lead_hours), str(metric),
                       str(reference), str(region))
        if key not in self._totals:
            self._totals[key] = [Accumulator(), Accumulator(), 0]
        sums = self._totals[key]
        sums[0].add(total)
        sums[1].add(weight)
        sums[2] += int(n_samples)

    def update(self, contributions):
        """Adds an iterable of contribution tuples in order."""
        for contribution in contributions:
            self.add(*contribution)
        return self

    def __len__(self):
        return len(self._totals)

    def finalize(self, metadata=None):
        """
        :return: ScoreTable with one entry per pooled key
        """
        table = ScoreTable(metadata)
        for key in sorted(self._totals):
            total, weight, n_samples = self._totals[key]
            if n_samples <= 0 or weight.total <= 0.0:
                continue
            score = total.total / weight.total
            if key.metric in ROOT_METRICS:
                score = math.sqrt(max(score, 0.0))
            # no negative zeros in the written tables
            score += 0.0
            table.add(key.variable, key.lead_hours, key.metric,
                      key.reference, score, n_samples, key.region)
        return table
