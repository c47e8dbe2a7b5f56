"""Pre-selection: cut the mined inventory to the top-k phrases by
cosine similarity to the averaged target-keyword embedding.

Target keywords themselves and single-word units are excluded: the task
is finding multi-word substitutes for the targets, not re-discovering
the targets.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from pathlib import Path

from .embeddings import EmbeddingTable, average_target_embedding, cosine, target_unit
from .phrases import PHRASE_JOINER

logger = logging.getLogger(__name__)

DEFAULT_POOL_SIZE = 1000


@dataclass(frozen=True)
class TargetKeywordSet:
    """Normalized, de-duplicated target keywords (order preserved)."""

    keywords: tuple[str, ...]

    def __post_init__(self):
        if not self.keywords:
            raise ValueError("target keyword set must be non-empty")

    @classmethod
    def from_strings(cls, raw) -> "TargetKeywordSet":
        seen = []
        for item in raw:
            keyword = " ".join(item.lower().split())
            if keyword and keyword not in seen:
                seen.append(keyword)
        return cls(tuple(seen))

    @classmethod
    def load(cls, path: str | Path) -> "TargetKeywordSet":
        """Target file: one keyword per line, UTF-8."""
        lines = Path(path).read_text(encoding="utf-8").splitlines()
        return cls.from_strings(lines)

    def units(self) -> set[str]:
        return {target_unit(k) for k in self.keywords}


@dataclass
class CandidatePool:
    """Phrases surviving pre-selection with their target similarity.

    Entries are (unit, similarity), similarity descending with
    lexicographic tie-break on the unit.
    """

    entries: list[tuple[str, float]]

    @property
    def units(self) -> list[str]:
        return [unit for unit, _ in self.entries]

    def __len__(self) -> int:
        return len(self.entries)


def preselect(
    table: EmbeddingTable,
    phrases: list[str],
    targets: TargetKeywordSet,
    k: int = DEFAULT_POOL_SIZE,
) -> CandidatePool:
    """Top-k multi-word phrase units by cosine to the target mean.

    ``phrases`` are underscore-joined units; units missing from the
    embedding table (dropped by its min-count gate) are skipped.  If
    fewer than ``k`` phrases survive, all of them are returned.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    target_mean = average_target_embedding(table, targets)
    excluded = targets.units()
    scored = []
    seen = set()
    for unit in phrases:
        if PHRASE_JOINER not in unit or unit in excluded or unit in seen:
            continue
        seen.add(unit)
        if unit not in table:
            continue
        scored.append((unit, cosine(table.vector(unit), target_mean)))
    scored.sort(key=lambda e: (-e[1], e[0]))
    pool = CandidatePool(entries=scored[:k])
    logger.info("pre-selected %d of %d eligible phrases (k=%d)", len(pool), len(scored), k)
    return pool


def write_pool_tsv(path: str | Path, pool: CandidatePool) -> None:
    with Path(path).open("w", encoding="utf-8") as fh:
        fh.write("phrase\tsimilarity\n")
        for unit, sim in pool.entries:
            fh.write(f"{unit}\t{sim:.6f}\n")


def read_pool_tsv(path: str | Path) -> CandidatePool:
    entries = []
    with Path(path).open(encoding="utf-8") as fh:
        header = fh.readline()
        if not header.startswith("phrase\t"):
            raise ValueError(f"{path}: not a candidate pool TSV artifact")
        for line in fh:
            unit, sim = line.rstrip("\n").split("\t")
            entries.append((unit, float(sim)))
    return CandidatePool(entries=entries)
