"""Published per-skill benchmark results used as an aggregation fixture.

Scores are percent-scale, higher-is-better, listed in the canonical skill
order (SA, FT, RC, WK, CR, NL, S, T, VR). Each skill is represented by one
task in the synthetic score file, so the per-skill mean equals the listed
value and the total is their sum.
"""

import csv
import io

from corpuskit.evalreport import SKILLS

SKILL_SCORES = {
    "base": [69.54, 53.51, 38.04, 41.10, 39.85, 38.28, 32.45, 41.55, 59.66],
    "extended": [77.09, 51.01, 39.38, 43.40, 41.26, 47.64, 41.00, 40.20, 60.85],
    "base (warm)": [88.17, 51.28, 52.48, 53.27, 48.02, 49.51, 35.88, 41.14, 60.52],
    "extended (warm)": [86.57, 54.64, 52.79, 51.51, 49.25, 48.48, 36.14, 42.48, 61.12],
    "base + books": [76.20, 55.15, 33.38, 41.54, 39.59, 51.69, 29.81, 38.68, 61.24],
    "base + newspapers": [76.57, 48.04, 35.29, 41.55, 37.79, 58.16, 29.26, 52.85, 60.85],
    "base + books + newspapers": [78.94, 53.06, 35.09, 41.53, 41.77, 52.11, 31.86, 40.00, 61.27],
    "base + fiction books": [74.16, 47.99, 33.71, 39.74, 41.39, 41.18, 28.41, 37.29, 64.33],
    "base + nonfiction books": [76.30, 56.51, 31.84, 41.06, 40.66, 52.48, 29.52, 38.88, 60.14],
    "base + nonfiction books + newspapers": [78.99, 53.91, 36.66, 41.85, 42.68, 54.50, 30.78, 40.50, 61.10],
    "base + original books": [75.46, 55.43, 32.87, 41.56, 41.08, 53.04, 28.74, 38.86, 60.83],
    "base + original books + newspapers": [77.72, 54.43, 35.42, 41.71, 41.46, 53.81, 30.67, 40.64, 60.95],
    "base + translated books": [72.22, 48.21, 34.54, 40.97, 43.33, 43.63, 27.51, 36.97, 62.15],
    "base (warm) instruct": [87.83, 53.70, 50.33, 54.98, 49.42, 59.53, 38.36, 49.75, 59.46],
    "extended (warm) instruct": [89.81, 57.80, 51.69, 53.09, 49.76, 55.91, 37.75, 47.72, 60.35],
    "base instruct": [69.45, 50.59, 36.27, 41.18, 42.06, 53.53, 35.14, 58.83, 58.35],
    "extended instruct": [78.90, 46.10, 38.68, 44.32, 43.57, 56.46, 36.40, 54.64, 59.29],
    "Mistral 7B v0.1": [88.41, 64.93, 56.68, 58.86, 36.01, 31.49, 10.09, 41.55, 59.99],
}

TOTALS = {
    "base": 413.98,
    "extended": 441.83,
    "base (warm)": 480.28,
    "extended (warm)": 482.98,
    "base + books": 427.30,
    "base + newspapers": 440.35,
    "base + books + newspapers": 435.64,
    "base + fiction books": 408.20,
    "base + nonfiction books": 427.40,
    "base + nonfiction books + newspapers": 440.97,
    "base + original books": 427.87,
    "base + original books + newspapers": 436.81,
    "base + translated books": 409.54,
    "base (warm) instruct": 503.36,
    "extended (warm) instruct": 503.89,
    "base instruct": 445.39,
    "extended instruct": 458.36,
    "Mistral 7B v0.1": 448.01,
}

CORE_MODELS = ["base", "extended", "base (warm)", "extended (warm)"]

TASKS = [
    "sentiment",
    "fairness",
    "reading",
    "knowledge",
    "commonsense",
    "norwegian",
    "summarization",
    "translation",
    "variation",
]

TASK_TO_SKILL = dict(zip(TASKS, SKILLS))

METRICS_TOML = """
[skills]
""" + "\n".join(f'{t} = "{s}"' for t, s in TASK_TO_SKILL.items()) + """

[metrics.score]
orientation = "higher_better"
scale = "percent"
"""


def scores_csv(models=None):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["model", "task", "prompt_id", "k_shot", "metric", "value"])
    for model, values in SKILL_SCORES.items():
        if models is not None and model not in models:
            continue
        for task, value in zip(TASKS, values):
            writer.writerow([model, task, "p0", 0, "score", value])
    return buf.getvalue()
