"""
Plot-ready series from score files.

For every (variable, metric, reference) the report writes a CSV with one
row per lead time and one column per model, plus an SVG line chart. Given
a baseline, every other model also gets a diff_<model> column (model minus
baseline) and a rel_<model> column (the same difference in percent of the
baseline).
"""
import logging
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import pandas as pd  # noqa: E402

from deepverif.exceptions import LeadGridMismatch  # noqa: E402
from deepverif.metrics.score_table import ScoreTable  # noqa: E402
from deepverif.variables import units_of  # noqa: E402

logger = logging.getLogger(__name__)

# fixed ids inside the SVG so reruns give identical bytes
matplotlib.rcParams["svg.hashsalt"] = "deepverif"


def model_label(path):
    """
    Name of the model behind a score file: its directory for files called
    scores.*, its stem otherwise.
    """
    path = Path(path)
    if path.stem == "scores" and path.parent.name:
        return path.parent.name
    return path.stem


def _unique_labels(paths):
    labels, seen = [], {}
    for path in paths:
        label = model_label(path)
        seen[label] = seen.get(label, 0) + 1
        if seen[label] > 1:
            label = "{}_{}".format(label, seen[label])
        labels.append(label)
    return labels


def report_frame(tables, group, baseline=None):
    """
    Series of one (variable, metric, reference, region) group.

    :param tables: dict label -> ScoreTable, in column order
    :param group: (variable, metric, reference, region)
    :param baseline: label of the baseline model, if any
    :return: DataFrame indexed by lead_hours
    :raises LeadGridMismatch: when the models hold different lead times
    """
    series = {label: table.series(*group) for label, table in tables.items()}
    series = {label: s for label, s in series.items() if s}
    leads = None
    for label, values in series.items():
        if leads is None:
            leads = list(values)
        elif list(values) != leads:
            raise LeadGridMismatch(
                "{}: {} has leads {} where others have {}".format(
                    "/".join(group[:3]), label, list(values), leads))

    frame = pd.DataFrame(series, index=pd.Index(leads, name="lead_hours"))
    if baseline in frame:
        reference = frame[baseline]
        for label in list(series):
            if label == baseline:
                continue
            difference = frame[label] - reference
            frame["diff_{}".format(label)] = difference
            frame["rel_{}".format(label)] = (
                100.0 * difference / reference.where(reference != 0.0))
    return frame


def plot_frame(frame, labels, group, path):
    """Writes an SVG line chart of the model columns of frame."""
    variable, metric, reference, _ = group
    fig, ax = plt.subplots(figsize=(6.4, 4.0))
    for label in labels:
        if label in frame:
            ax.plot(frame.index, frame[label], marker="o", markersize=3,
                    label=label)
    ax.set_xlabel("lead time (h)")
    ax.set_ylabel("{} [{}]".format(metric, units_of(variable)))
    ax.set_title("{} vs {}".format(variable, reference))
    ax.grid(True, alpha=0.3)
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, format="svg", metadata={"Date": None})
    plt.close(fig)
    return path


def cmd_report(score_files, out, baseline=None):
    """
    Writes {variable}_{metric}_{reference}.csv and .svg for every group
    found in the score files.

    :param score_files: candidate score files (.csv or .json)
    :param out: output directory
    :param baseline: optional baseline score file
    :return: list of Paths written
    :raises LeadGridMismatch: when files disagree on the lead times of a
        group
    """
    paths = ([Path(baseline)] if baseline else []) + \
        [Path(p) for p in score_files]
    labels = _unique_labels(paths)
    tables = {label: ScoreTable.read(path)
              for label, path in zip(labels, paths)}
    baseline_label = labels[0] if baseline else None

    groups = sorted({group for table in tables.values()
                     for group in table.groups()})
    out = Path(out)
    out.mkdir(parents=True, exist_ok=True)
    written = []
    for group in groups:
        variable, metric, reference, region = group
        stem = "_".join((variable, metric, reference))
        if region != "global":
            stem = "{}_{}".format(stem, region)
        frame = report_frame(tables, group, baseline_label)
        csv_path = out / "{}.csv".format(stem)
        frame.to_csv(csv_path, lineterminator="\n")
        written.append(csv_path)
        written.append(plot_frame(frame, labels, group,
                                  out / "{}.svg".format(stem)))
    logger.info("report: %d series from %d files", len(groups), len(paths))
    return written
