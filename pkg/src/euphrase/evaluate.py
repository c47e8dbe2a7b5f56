"""Precision-at-k evaluation against a ground-truth euphemism list."""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass
from pathlib import Path

from .phrases import PHRASE_JOINER
from .ranking import RankedList

logger = logging.getLogger(__name__)

DEFAULT_KS = (10, 20, 30, 50)


@dataclass(frozen=True)
class GroundTruth:
    """Known euphemistic phrases in space-separated lowercase form."""

    phrases: frozenset[str]

    def __post_init__(self):
        if not self.phrases:
            raise ValueError("ground truth must be non-empty")
        single = [p for p in self.phrases if " " not in p]
        if single:
            raise ValueError(f"ground truth entries must be multi-word, got: {sorted(single)}")

    @classmethod
    def from_strings(cls, raw) -> "GroundTruth":
        return cls(frozenset(" ".join(item.lower().split()) for item in raw if item.strip()))

    @classmethod
    def load(cls, path: str | Path) -> "GroundTruth":
        """Ground-truth file: one phrase per line, UTF-8, lowercase."""
        return cls.from_strings(Path(path).read_text(encoding="utf-8").splitlines())


def _surface(unit: str) -> str:
    return unit.replace(PHRASE_JOINER, " ")


def precision_at_k(ranked: RankedList, truth: GroundTruth, k: int) -> float:
    """Fraction of the top-k phrases that are in the ground truth.

    The denominator is always ``k``, even when the ranked list is
    shorter.  Phrases are compared in space-separated lowercase form.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    top = ranked.entries[: min(k, len(ranked.entries))]
    hits = sum(1 for unit, _ in top if _surface(unit) in truth.phrases)
    return hits / k


@dataclass
class EvalReport:
    method: str
    ks: tuple[int, ...]
    hits: dict[int, int]
    precision: dict[int, float]

    def to_json(self) -> str:
        return json.dumps(
            {
                "method": self.method,
                "precision_at_k": {str(k): self.precision[k] for k in self.ks},
                "hits": {str(k): self.hits[k] for k in self.ks},
            },
            indent=2,
            sort_keys=True,
        )


def evaluate_ranking(ranked: RankedList, truth: GroundTruth, ks=DEFAULT_KS) -> EvalReport:
    hits = {}
    precision = {}
    for k in ks:
        p = precision_at_k(ranked, truth, k)
        precision[k] = p
        hits[k] = round(p * k)
    return EvalReport(method=ranked.method, ks=tuple(ks), hits=hits, precision=precision)


def write_eval_tsv(path: str | Path, report: EvalReport) -> None:
    with Path(path).open("w", encoding="utf-8") as fh:
        fh.write("method\tk\thits\tprecision\n")
        for k in report.ks:
            fh.write(f"{report.method}\t{k}\t{report.hits[k]}\t{report.precision[k]:.6f}\n")


def write_eval_json(path: str | Path, report: EvalReport) -> None:
    Path(path).write_text(report.to_json() + "\n", encoding="utf-8")
