"""Candidate ranking: the main scorer-weighted ranking plus the
similarity-only, eigenvector-centrality and no-preselection baselines.

The main rule is additive: a candidate's weight is the sum over masked
sentences of its normalized mask-filling score, reported unnormalized.
All rankings break ties lexicographically on the phrase unit so output
is reproducible across runs and platforms.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

from .contexts import MaskedSentence
from .embeddings import EmbeddingTable
from .errors import RankingError
from .phrases import PHRASE_JOINER
from .preselect import CandidatePool, TargetKeywordSet
from .scoring import Scorer, build_score_matrix

logger = logging.getLogger(__name__)

METHODS = ("epd", "word2vec", "eigen", "rank-all")


@dataclass
class RankedList:
    """Phrases ordered by weight descending, ties lexicographic."""

    method: str
    entries: list[tuple[str, float]]

    @property
    def units(self) -> list[str]:
        return [unit for unit, _ in self.entries]


def _ranked(method: str, weights: dict[str, float]) -> RankedList:
    entries = sorted(weights.items(), key=lambda e: (-e[1], e[0]))
    return RankedList(method=method, entries=entries)


def _rank_by_scorer(
    method: str,
    candidates: Sequence[str],
    sentences: Sequence[MaskedSentence],
    scorer: Scorer,
) -> RankedList:
    if not candidates:
        raise RankingError("candidate pool is empty; nothing to rank")
    if not sentences:
        raise RankingError("no masked sentences; candidate weights would be vacuous")
    matrix = build_score_matrix(scorer, candidates, sentences)
    weights = matrix.scores.sum(axis=1)
    return _ranked(method, {unit: float(w) for unit, w in zip(matrix.candidates, weights)})


def rank_epd(pool: CandidatePool, sentences: Sequence[MaskedSentence], scorer: Scorer) -> RankedList:
    """Weight each pooled candidate by its summed mask-filling scores."""
    return _rank_by_scorer("epd", pool.units, sentences, scorer)


def rank_all(phrases: Sequence[str], sentences: Sequence[MaskedSentence], scorer: Scorer) -> RankedList:
    """Same rule as :func:`rank_epd` but over the whole mined inventory."""
    candidates = sorted({u for u in phrases if PHRASE_JOINER in u})
    return _rank_by_scorer("rank-all", candidates, sentences, scorer)


def rank_word2vec(pool: CandidatePool) -> RankedList:
    """Similarity-only baseline: the pool order is the ranking."""
    return _ranked("word2vec", {unit: sim for unit, sim in pool.entries})


def power_iteration(
    adjacency: np.ndarray,
    tol: float = 1e-10,
    max_iter: int = 1000,
) -> tuple[np.ndarray, float]:
    """Dominant eigenvector of a non-negative symmetric matrix.

    Starts from the uniform vector and L2-normalizes each step; returns
    (eigenvector, eigenvalue estimate).  An all-zero matrix yields the
    zero vector.
    """
    n = adjacency.shape[0]
    if not adjacency.any():
        return np.zeros(n), 0.0
    v = np.full(n, 1.0 / np.sqrt(n))
    for iteration in range(max_iter):
        nxt = adjacency @ v
        norm = np.linalg.norm(nxt)
        if norm == 0.0:
            return np.zeros(n), 0.0
        nxt /= norm
        if np.max(np.abs(nxt - v)) < tol:
            v = nxt
            break
        v = nxt
    else:
        logger.warning("power iteration did not converge within %d iterations", max_iter)
    eigenvalue = float(v @ (adjacency @ v))
    return v, eigenvalue


def rank_eigen(
    table: EmbeddingTable,
    pool: CandidatePool,
    targets: TargetKeywordSet,
    sim_threshold: float = 0.5,
) -> RankedList:
    """Eigenvector-centrality baseline on the similarity graph.

    Nodes are the pooled phrases plus in-vocabulary targets; edges carry
    the cosine similarity when it reaches ``sim_threshold``.  If the
    graph has no edges at all, centrality is degenerate and the ranking
    falls back to pool order.
    """
    if not pool.entries:
        raise RankingError("candidate pool is empty; nothing to rank")
    target_units = [u for u in sorted(targets.units()) if u in table]
    nodes = pool.units + [u for u in target_units if u not in set(pool.units)]
    vectors = np.stack([table.vector(u) for u in nodes]).astype(np.float64)
    norms = np.linalg.norm(vectors, axis=1, keepdims=True)
    norms[norms == 0] = 1.0
    unit_vecs = vectors / norms
    sims = np.clip(unit_vecs @ unit_vecs.T, -1.0, 1.0)
    adjacency = np.where(sims >= sim_threshold, sims, 0.0)
    np.fill_diagonal(adjacency, 0.0)
    if not adjacency.any():
        logger.warning("similarity graph has no edges; falling back to pool order")
        return RankedList(method="eigen", entries=[(unit, 0.0) for unit in pool.units])
    centrality, _ = power_iteration(adjacency)
    pool_set = set(pool.units)
    weights = {
        unit: float(centrality[i]) for i, unit in enumerate(nodes) if unit in pool_set
    }
    return _ranked("eigen", weights)


def write_ranked_tsv(path: str | Path, ranked: RankedList) -> None:
    """Ranked output artifact: rank, space-separated phrase, weight, method."""
    with Path(path).open("w", encoding="utf-8") as fh:
        fh.write("rank\tphrase\tweight\tmethod\n")
        for rank, (unit, weight) in enumerate(ranked.entries, start=1):
            phrase = unit.replace(PHRASE_JOINER, " ")
            fh.write(f"{rank}\t{phrase}\t{weight:.6f}\t{ranked.method}\n")


def read_ranked_tsv(path: str | Path) -> RankedList:
    entries = []
    method = "epd"
    with Path(path).open(encoding="utf-8") as fh:
        header = fh.readline()
        if not header.startswith("rank\t"):
            raise ValueError(f"{path}: not a ranked TSV artifact")
        for line in fh:
            _, phrase, weight, method = line.rstrip("\n").split("\t")
            entries.append((phrase.replace(" ", PHRASE_JOINER), float(weight)))
    return RankedList(method=method, entries=entries)
