"""Benchmark score aggregation: 0-100 normalization, best-of-shots/prompts
selection, per-skill averages and totals, rankings, and gains vs a baseline.
"""

import csv
import io
import math
from dataclasses import dataclass, field

from .errors import DataError

__all__ = [
    "SKILLS",
    "SKILL_ABBREV",
    "K_SHOTS",
    "ScoreRecord",
    "MetricSpec",
    "SkillMap",
    "ModelReport",
    "load_scores",
    "normalize_score",
    "best_score",
    "skill_scores",
    "gains",
    "rank_models",
    "render",
]

# canonical order used for every table and CSV
SKILLS = [
    "Sentiment Analysis",
    "Fairness & Truthfulness",
    "Reading Comprehension",
    "World Knowledge",
    "Commonsense Reasoning",
    "Norwegian Language",
    "Summarization",
    "Translation",
    "Variation & Readability",
]

SKILL_ABBREV = {
    "Sentiment Analysis": "SA",
    "Fairness & Truthfulness": "FT",
    "Reading Comprehension": "RC",
    "World Knowledge": "WK",
    "Commonsense Reasoning": "CR",
    "Norwegian Language": "NL",
    "Summarization": "S",
    "Translation": "T",
    "Variation & Readability": "VR",
}

K_SHOTS = (0, 1, 4, 16)

ORIENTATIONS = ("higher_better", "lower_better")
SCALES = ("unit_interval", "percent", "unbounded")


@dataclass(frozen=True)
class ScoreRecord:
    model: str
    task: str
    prompt_id: str
    k_shot: int
    metric: str
    value: float

    def __post_init__(self):
        if self.k_shot not in K_SHOTS:
            raise DataError(f"k_shot must be one of {K_SHOTS}, got {self.k_shot}")
        if not math.isfinite(self.value):
            raise DataError(f"non-finite value for {self.model}/{self.task}")


@dataclass(frozen=True)
class MetricSpec:
    orientation: str = "higher_better"
    scale: str = "percent"
    # affine transform into the percent scale, required for unbounded metrics
    transform_scale: float | None = None
    transform_offset: float | None = None

    def __post_init__(self):
        if self.orientation not in ORIENTATIONS:
            raise DataError(f"unknown orientation {self.orientation!r}")
        if self.scale not in SCALES:
            raise DataError(f"unknown scale {self.scale!r}")


class SkillMap:
    """task -> skill mapping over the nine fixed skills."""

    def __init__(self, mapping):
        for task, skill in mapping.items():
            if skill not in SKILLS:
                raise DataError(f"unknown skill {skill!r} for task {task!r}")
        self._mapping = dict(mapping)

    def skill_of(self, task):
        try:
            return self._mapping[task]
        except KeyError:
            raise DataError(f"task {task!r} is not mapped to a skill") from None

    def tasks_of(self, skill):
        return sorted(t for t, s in self._mapping.items() if s == skill)

    def items(self):
        return self._mapping.items()


@dataclass
class ModelReport:
    model: str
    skills: dict
    total: float
    ranks: dict = field(default_factory=dict)
    gain_vs_baseline: float | None = None
    skill_gains: dict = field(default_factory=dict)


def load_scores(fileobj):
    """Read the model,task,prompt_id,k_shot,metric,value CSV."""
    reader = csv.DictReader(fileobj)
    required = {"model", "task", "prompt_id", "k_shot", "metric", "value"}
    if reader.fieldnames is None or not required <= set(reader.fieldnames):
        raise DataError(
            f"score CSV must have columns {sorted(required)}, got {reader.fieldnames}"
        )
    records = []
    for row in reader:
        try:
            records.append(
                ScoreRecord(
                    model=row["model"],
                    task=row["task"],
                    prompt_id=row["prompt_id"],
                    k_shot=int(row["k_shot"]),
                    metric=row["metric"],
                    value=float(row["value"]),
                )
            )
        except (TypeError, ValueError) as exc:
            raise DataError(f"malformed score row {row}: {exc}") from None
    return records


def normalize_score(value, spec):
    """Map a raw metric value into higher-is-better [0, 100]."""
    if spec.scale == "unit_interval":
        value = value * 100.0
    elif spec.scale == "unbounded":
        if spec.transform_scale is None:
            raise DataError("unbounded metric requires an explicit transform")
        value = value * spec.transform_scale + (spec.transform_offset or 0.0)
    if spec.orientation == "lower_better":
        value = 100.0 - value
    return min(100.0, max(0.0, value))


def _metric_spec(metrics, name):
    spec = metrics.get(name)
    if spec is None:
        raise DataError(f"no normalization config for metric {name!r}")
    return spec


def best_score(records, metrics, primary_metric=None):
    """Best normalized value over shots and prompts for one (model, task).

    With several metrics present, a designated primary metric is required.
    """
    records = list(records)
    if not records:
        raise DataError("missing task")
    present = {r.metric for r in records}
    if primary_metric is None:
        if len(present) > 1:
            raise DataError(
                f"task {records[0].task!r} has metrics {sorted(present)} "
                "but no designated primary metric"
            )
        primary_metric = next(iter(present))
    chosen = [r for r in records if r.metric == primary_metric]
    if not chosen:
        raise DataError(
            f"primary metric {primary_metric!r} absent for task {records[0].task!r}"
        )
    return max(
        normalize_score(r.value, _metric_spec(metrics, r.metric)) for r in chosen
    )


def _group(records):
    grouped = {}
    for r in records:
        grouped.setdefault((r.model, r.task), []).append(r)
    return grouped


def best_scores_table(records, metrics, primary_metrics=None):
    """(model, task) -> best normalized score."""
    primary_metrics = primary_metrics or {}
    return {
        (model, task): best_score(rs, metrics, primary_metrics.get(task))
        for (model, task), rs in _group(records).items()
    }


def skill_scores(model, records, skill_map, metrics, primary_metrics=None):
    """Per-skill means of best task scores plus their sum.

    Every one of the nine skills must have at least one task present.
    """
    table = best_scores_table(
        [r for r in records if r.model == model], metrics, primary_metrics
    )
    per_task = {}
    for (_, task), score in table.items():
        per_task.setdefault(skill_map.skill_of(task), []).append(score)
    missing = [s for s in SKILLS if s not in per_task]
    if missing:
        raise DataError(f"no tasks present for skills: {missing}")
    skills = {s: sum(v) / len(v) for s, v in per_task.items()}
    total = sum(skills[s] for s in SKILLS)
    return ModelReport(model=model, skills=skills, total=total)


def gains(reports, baseline):
    """Percent gains of each model over the baseline, overall and per skill.

    Per-skill gains against a zero baseline score are reported as None.
    """
    by_model = {r.model: r for r in reports}
    if baseline not in by_model:
        raise DataError(f"baseline model {baseline!r} not in reports")
    base = by_model[baseline]
    if base.total == 0:
        raise DataError("baseline total is zero")
    for report in reports:
        report.gain_vs_baseline = (report.total / base.total - 1.0) * 100.0
        report.skill_gains = {
            s: (
                (report.skills[s] / base.skills[s] - 1.0) * 100.0
                if base.skills[s] != 0
                else None
            )
            for s in SKILLS
        }
    return reports


def _competition_ranks(values, reverse):
    """Competition ranking ('1224'): ties share the better rank."""
    ranks = {}
    for key, value in values.items():
        better = sum(
            1
            for v in values.values()
            if (v > value if reverse else v < value)
        )
        ranks[key] = 1 + better
    return ranks


def rank_models(records, skill_map, metrics, primary_metrics=None):
    """Per-skill competition ranks from per-task rankings.

    Models are ranked per task by best score, per-task ranks are averaged
    within each skill, and the averages are ranked again. Lower is better.
    """
    models = sorted({r.model for r in records})
    if len(models) < 2:
        raise DataError("ranking needs at least 2 models")
    table = best_scores_table(records, metrics, primary_metrics)
    tasks = sorted({task for (_, task) in table})
    missing = [
        (model, task)
        for model in models
        for task in tasks
        if (model, task) not in table
    ]
    if missing:
        raise DataError(f"unequal task coverage, missing pairs: {missing}")

    task_ranks = {
        task: _competition_ranks(
            {m: table[(m, task)] for m in models}, reverse=True
        )
        for task in tasks
    }
    skill_ranks = {m: {} for m in models}
    for skill in SKILLS:
        skill_tasks = [t for t in tasks if skill_map.skill_of(t) == skill]
        if not skill_tasks:
            continue
        means = {
            m: sum(task_ranks[t][m] for t in skill_tasks) / len(skill_tasks)
            for m in models
        }
        ranks = _competition_ranks(means, reverse=False)
        for m in models:
            skill_ranks[m][skill] = ranks[m]
    return skill_ranks


def render(reports, include_gains=False):
    """Deterministic CSV and aligned text table, 2-decimal formatting."""
    header = ["model"] + [SKILL_ABBREV[s] for s in SKILLS] + ["Score"]
    if include_gains:
        header.append("Gain%")
    rows = []
    for report in sorted(reports, key=lambda r: r.model):
        row = [report.model]
        row += [f"{report.skills[s]:.2f}" for s in SKILLS]
        row.append(f"{report.total:.2f}")
        if include_gains:
            gain = report.gain_vs_baseline
            row.append("" if gain is None else f"{gain:+.2f}")
        rows.append(row)

    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    csv_text = buf.getvalue()

    widths = [
        max(len(header[i]), *(len(r[i]) for r in rows)) if rows else len(header[i])
        for i in range(len(header))
    ]
    lines = ["  ".join(h.ljust(w) for h, w in zip(header, widths)).rstrip()]
    for row in rows:
        lines.append(
            "  ".join(
                cell.ljust(w) if i == 0 else cell.rjust(w)
                for i, (cell, w) in enumerate(zip(row, widths))
            ).rstrip()
        )
    return csv_text, "\n".join(lines) + "\n"
