"""TOML configuration shared by the CLI verbs.

Sections (all optional unless a verb needs them):

- ``seed``: integer; sampling verbs never fall back to wall-clock seeds.
- ``[paths]``: named input files; existence is checked at load.
- ``[budget]``: ``policy`` plus ``[budget.ratios]`` language -> ratio.
- ``[[subset]]``: ``name`` and ``predicate`` string per ablation subset.
- ``[sampler]``: ``tolerance``, ``bins``, ``adjust_mu``.
- ``[metrics.<name>]``: ``orientation``, ``scale``, optional
  ``transform_scale``/``transform_offset``.
- ``[tasks.<task>]``: ``primary_metric``.
- ``[skills]``: task -> skill.
"""

import os

try:
    import tomllib
except ModuleNotFoundError:
    import tomli as tomllib
from dataclasses import dataclass, field

from .errors import DataError
from .evalreport import MetricSpec, SkillMap
from .pipeline import LanguageBudget, SubsetSpec

__all__ = ["PipelineConfig", "load_config"]


@dataclass
class PipelineConfig:
    seed: int = 0
    paths: dict = field(default_factory=dict)
    budget: LanguageBudget | None = None
    subsets: list = field(default_factory=list)
    sampler: dict = field(default_factory=dict)
    metrics: dict = field(default_factory=dict)
    primary_metrics: dict = field(default_factory=dict)
    skill_map: SkillMap | None = None


def load_config(path):
    try:
        with open(path, "rb") as fh:
            raw = tomllib.load(fh)
    except tomllib.TOMLDecodeError as exc:
        raise DataError(f"invalid config {path}: {exc}") from None

    paths = raw.get("paths", {})
    for name, p in paths.items():
        if not os.path.exists(p):
            raise DataError(f"config path {name!r} does not exist: {p}")

    budget = None
    if "budget" in raw:
        budget = LanguageBudget(
            ratios=dict(raw["budget"].get("ratios", {})),
            unlisted_policy=raw["budget"].get("policy", "drop"),
        )

    subsets = [
        SubsetSpec(name=s["name"], predicate=s["predicate"])
        for s in raw.get("subset", [])
    ]
    # validate predicates eagerly so bad specs fail at load
    for spec in subsets:
        spec.compile()

    metrics = {
        name: MetricSpec(
            orientation=m.get("orientation", "higher_better"),
            scale=m.get("scale", "percent"),
            transform_scale=m.get("transform_scale"),
            transform_offset=m.get("transform_offset"),
        )
        for name, m in raw.get("metrics", {}).items()
    }
    primary_metrics = {
        task: t["primary_metric"]
        for task, t in raw.get("tasks", {}).items()
        if "primary_metric" in t
    }
    skill_map = SkillMap(raw["skills"]) if "skills" in raw else None

    return PipelineConfig(
        seed=int(raw.get("seed", 0)),
        paths=paths,
        budget=budget,
        subsets=subsets,
        sampler=dict(raw.get("sampler", {})),
        metrics=metrics,
        primary_metrics=primary_metrics,
        skill_map=skill_map,
    )
