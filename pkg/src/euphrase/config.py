"""Run configuration: a flat key-value JSON document with strict validation.

Unknown keys are rejected and all validation failures are reported at
once.  Every run writes a ``resolved_config.json`` snapshot next to its
outputs so results can be reproduced from the artifacts alone.
"""

from __future__ import annotations

import dataclasses
import json
from dataclasses import dataclass
from pathlib import Path

from .errors import ConfigError

SCORERS = ("offline", "remote")
RANK_METHODS = ("epd", "word2vec", "eigen", "rank-all")
CORPUS_FORMATS = ("plain-lines", "json-lines")


@dataclass
class PipelineConfig:
    # inputs
    corpus_path: str | None = None
    corpus_format: str = "plain-lines"
    text_field: str = "text"
    targets_path: str | None = None
    ground_truth_path: str | None = None
    stopwords_path: str | None = None
    # run
    output_dir: str = "out"
    seed: int = 1
    threads: int = 1
    # phrase mining
    phrase_max_len: int = 4
    phrase_min_count: int = 5
    quality_threshold: float = 0.5
    # embedding training
    embed_window: int = 6
    embed_dim: int = 100
    embed_min_count: int = 5
    embed_subsample: float = 1e-4
    embed_negatives: int = 5
    embed_epochs: int = 5
    embed_initial_lr: float = 0.025
    # pre-selection
    preselect_k: int = 1000
    # masked contexts
    context_max_side: int = 15
    context_min_tokens: int = 5
    context_min_content: int = 2
    # scoring
    scorer: str = "offline"
    offline_window: int = 3
    offline_alpha: float = 0.1
    remote_endpoint: str | None = None
    remote_timeout: float = 30.0
    remote_batch_size: int = 32
    remote_retries: int = 3
    remote_parallel: int = 4
    # ranking / evaluation
    rank_method: str = "epd"
    eigen_sim_threshold: float = 0.5
    eval_ks: tuple[int, ...] = (10, 20, 30, 50)

    @classmethod
    def field_names(cls) -> set[str]:
        return {f.name for f in dataclasses.fields(cls)}

    @classmethod
    def from_dict(cls, data: dict) -> "PipelineConfig":
        problems = []
        unknown = sorted(set(data) - cls.field_names())
        if unknown:
            problems.append("unknown config key(s): " + ", ".join(repr(k) for k in unknown))
            data = {k: v for k, v in data.items() if k not in unknown}
        config = cls(**data)
        problems.extend(config._validation_problems())
        if problems:
            raise ConfigError("; ".join(problems))
        return config

    @classmethod
    def from_file(cls, path: str | Path) -> "PipelineConfig":
        try:
            raw = json.loads(Path(path).read_text(encoding="utf-8"))
        except FileNotFoundError:
            raise ConfigError(f"config file not found: {path}") from None
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config file {path} is not valid JSON: {exc}") from None
        if not isinstance(raw, dict):
            raise ConfigError(f"config file {path} must hold a flat JSON object")
        nested = [k for k, v in raw.items() if isinstance(v, dict)]
        if nested:
            raise ConfigError(
                "config must be flat; nested object(s) under: " + ", ".join(map(repr, nested))
            )
        if "eval_ks" in raw and isinstance(raw["eval_ks"], list):
            raw["eval_ks"] = tuple(raw["eval_ks"])
        return cls.from_dict(raw)

    def _validation_problems(self) -> list[str]:
        problems = []
        if self.corpus_format not in CORPUS_FORMATS:
            problems.append(f"corpus_format must be one of {CORPUS_FORMATS}")
        if self.scorer not in SCORERS:
            problems.append(f"scorer must be one of {SCORERS}")
        if self.rank_method not in RANK_METHODS:
            problems.append(f"rank_method must be one of {RANK_METHODS}")
        if self.scorer == "remote" and not self.remote_endpoint:
            problems.append("scorer 'remote' requires remote_endpoint")
        for name, minimum in (
            ("seed", 0),
            ("threads", 1),
            ("phrase_max_len", 2),
            ("phrase_min_count", 1),
            ("embed_window", 1),
            ("embed_dim", 1),
            ("embed_min_count", 1),
            ("embed_negatives", 1),
            ("embed_epochs", 1),
            ("preselect_k", 1),
            ("context_min_tokens", 0),
            ("context_min_content", 0),
            ("offline_window", 1),
            ("remote_batch_size", 1),
            ("remote_retries", 1),
            ("remote_parallel", 1),
        ):
            value = getattr(self, name)
            if not isinstance(value, int) or isinstance(value, bool) or value < minimum:
                problems.append(f"{name} must be an integer >= {minimum}")
        for name in ("embed_subsample", "quality_threshold", "eigen_sim_threshold"):
            value = getattr(self, name)
            if not isinstance(value, (int, float)) or value < 0:
                problems.append(f"{name} must be a non-negative number")
        for name in ("embed_initial_lr", "offline_alpha", "remote_timeout"):
            value = getattr(self, name)
            if not isinstance(value, (int, float)) or value <= 0:
                problems.append(f"{name} must be a positive number")
        if not (
            isinstance(self.eval_ks, (tuple, list))
            and self.eval_ks
            and all(isinstance(k, int) and k >= 1 for k in self.eval_ks)
        ):
            problems.append("eval_ks must be a non-empty list of integers >= 1")
        return problems

    def to_json(self) -> str:
        data = dataclasses.asdict(self)
        data["eval_ks"] = list(self.eval_ks)
        return json.dumps(data, indent=2, sort_keys=True)

    def write_snapshot(self, outdir: str | Path) -> Path:
        path = Path(outdir) / "resolved_config.json"
        path.write_text(self.to_json() + "\n", encoding="utf-8")
        return path
