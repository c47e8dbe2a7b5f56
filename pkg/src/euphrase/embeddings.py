"""Skip-gram negative-sampling embeddings over the segmented corpus.

Words and joined phrase units share one vector space so that cosine
similarity between a mined phrase and the averaged target keywords is
meaningful.  The trainer follows the classic word2vec recipe:

* negative-sampling objective, negatives drawn from the unigram
  distribution raised to the 0.75 power;
* aggressive subsampling of frequent units with the standard
  ``(sqrt(f/t) + 1) * t/f`` keep probability;
* per-center dynamic window (uniform in ``1..window``);
* linear learning-rate decay with a floor of ``initial_lr / 10000``.

With ``threads == 1`` the whole run is driven by a single seeded
generator, so two runs with the same seed produce bit-identical tables.
``threads > 1`` shards sentences across worker threads that update the
shared parameter matrices without locks; those races are benign for
quality but give up determinism.
"""

from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import EmbeddingError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class TrainParams:
    window: int = 6
    dim: int = 100
    min_count: int = 5
    subsample: float = 1e-4
    negatives: int = 5
    epochs: int = 5
    initial_lr: float = 0.025
    seed: int = 1
    threads: int = 1


class EmbeddingTable:
    """Immutable unit -> vector map with a fixed dimensionality."""

    def __init__(self, units: list[str], matrix: np.ndarray):
        if matrix.ndim != 2 or matrix.shape[0] != len(units):
            raise ValueError("matrix must have one row per unit")
        if not np.all(np.isfinite(matrix)):
            raise EmbeddingError("embedding matrix contains non-finite values")
        if len(set(units)) != len(units):
            raise ValueError("duplicate units in embedding table")
        self.units = list(units)
        self.matrix = matrix
        self.dim = matrix.shape[1]
        self._index = {u: i for i, u in enumerate(units)}

    def __contains__(self, unit: str) -> bool:
        return unit in self._index

    def __len__(self) -> int:
        return len(self.units)

    def vector(self, unit: str) -> np.ndarray:
        try:
            return self.matrix[self._index[unit]]
        except KeyError:
            raise EmbeddingError(f"unit {unit!r} is not in the embedding table") from None

    def save(self, path: str | Path) -> None:
        """Text format: header ``<count> <dim>``, then one unit per line."""
        with Path(path).open("w", encoding="utf-8") as fh:
            fh.write(f"{len(self.units)} {self.dim}\n")
            for unit, row in zip(self.units, self.matrix):
                fh.write(unit + " " + " ".join(f"{x:.6f}" for x in row) + "\n")

    @classmethod
    def load(cls, path: str | Path) -> "EmbeddingTable":
        with Path(path).open(encoding="utf-8") as fh:
            header = fh.readline().split()
            if len(header) != 2:
                raise ValueError(f"{path}: malformed embedding header")
            count, dim = int(header[0]), int(header[1])
            units = []
            rows = np.empty((count, dim), dtype=np.float32)
            for i in range(count):
                parts = fh.readline().split()
                if len(parts) != dim + 1:
                    raise ValueError(f"{path}: row {i} has {len(parts) - 1} values, expected {dim}")
                units.append(parts[0])
                rows[i] = [float(x) for x in parts[1:]]
        return cls(units, rows)


def _keep_probabilities(counts: np.ndarray, subsample: float) -> np.ndarray:
    if subsample <= 0:
        return np.ones(len(counts))
    threshold = subsample * counts.sum()
    with np.errstate(divide="ignore"):
        p = (np.sqrt(counts / threshold) + 1.0) * (threshold / counts)
    return np.minimum(p, 1.0)


def _negative_cdf(counts: np.ndarray) -> np.ndarray:
    weights = counts.astype(np.float64) ** 0.75
    cdf = np.cumsum(weights)
    return cdf / cdf[-1]


def _sigmoid(x: np.ndarray) -> np.ndarray:
    return 1.0 / (1.0 + np.exp(-x))


class _TrainState:
    """Shared mutable state for one training run."""

    def __init__(self, params: TrainParams, units: list[str], counts: np.ndarray):
        self.params = params
        rng = np.random.default_rng(params.seed)
        vocab_size = len(units)
        self.syn0 = ((rng.random((vocab_size, params.dim)) - 0.5) / params.dim).astype(np.float32)
        self.syn1 = np.zeros((vocab_size, params.dim), dtype=np.float32)
        self.rng = rng
        self.keep = _keep_probabilities(counts, params.subsample)
        self.neg_cdf = _negative_cdf(counts)
        self.total_train_words = int(counts.sum()) * params.epochs
        self.processed = 0
        self.lr_floor = params.initial_lr / 10000.0

    def alpha(self) -> float:
        remaining = 1.0 - self.processed / max(self.total_train_words, 1)
        return max(self.params.initial_lr * remaining, self.lr_floor)

    def train_sentences(self, id_sentences: list[np.ndarray], rng: np.random.Generator) -> None:
        params = self.params
        negatives = params.negatives
        syn0, syn1 = self.syn0, self.syn1
        for ids in id_sentences:
            alpha = self.alpha()
            self.processed += len(ids)
            if len(ids) == 0:
                continue
            kept = ids[rng.random(len(ids)) < self.keep[ids]]
            n_kept = len(kept)
            if n_kept < 2:
                continue
            windows = rng.integers(1, params.window + 1, size=n_kept)
            for pos in range(n_kept):
                center = kept[pos]
                w = windows[pos]
                lo = max(0, pos - w)
                hi = min(n_kept, pos + w + 1)
                for pos2 in range(lo, hi):
                    if pos2 == pos:
                        continue
                    ctx = kept[pos2]
                    negs = np.searchsorted(self.neg_cdf, rng.random(negatives))
                    while True:
                        clash = negs == center
                        if not clash.any():
                            break
                        negs[clash] = np.searchsorted(self.neg_cdf, rng.random(int(clash.sum())))
                    rows = np.concatenate(([center], negs))
                    l1 = syn0[ctx]
                    l2 = syn1[rows]
                    f = _sigmoid(l2 @ l1)
                    g = (alpha * -f).astype(np.float32)
                    g[0] += alpha
                    syn1[rows] += np.outer(g, l1)
                    syn0[ctx] += g @ l2


def train_embeddings(corpus, params: TrainParams = TrainParams()) -> EmbeddingTable:
    """Train an :class:`EmbeddingTable` on a (segmented) corpus.

    ``corpus`` is anything with ``sentences()`` and a ``vocab`` counter;
    only units with ``count >= params.min_count`` enter the vocabulary.
    """
    retained = sorted(
        ((u, c) for u, c in corpus.vocab.items() if c >= params.min_count),
        key=lambda kv: (-kv[1], kv[0]),
    )
    if not retained:
        raise EmbeddingError(
            f"no unit satisfies the min_count gate (min_count={params.min_count}); "
            "the corpus is too small or too sparse"
        )
    units = [u for u, _ in retained]
    counts = np.array([c for _, c in retained], dtype=np.int64)
    index = {u: i for i, u in enumerate(units)}

    id_sentences = []
    for _, _, sentence in corpus.sentences():
        ids = np.array([index[t] for t in sentence if t in index], dtype=np.int64)
        if len(ids) > 0:
            id_sentences.append(ids)

    state = _TrainState(params, units, counts)
    logger.info(
        "training embeddings: %d units, %d sentences, dim=%d window=%d epochs=%d threads=%d",
        len(units),
        len(id_sentences),
        params.dim,
        params.window,
        params.epochs,
        params.threads,
    )
    if params.threads <= 1:
        for _ in range(params.epochs):
            state.train_sentences(id_sentences, state.rng)
    else:
        shards = [id_sentences[i :: params.threads] for i in range(params.threads)]
        for epoch in range(params.epochs):
            with ThreadPoolExecutor(max_workers=params.threads) as pool:
                futures = [
                    pool.submit(
                        state.train_sentences,
                        shard,
                        np.random.default_rng((params.seed, epoch, i)),
                    )
                    for i, shard in enumerate(shards)
                ]
                for fut in futures:
                    fut.result()
    return EmbeddingTable(units, state.syn0)


def cosine(u: np.ndarray, v: np.ndarray) -> float:
    """Cosine similarity in [-1, 1]; rejects zero vectors and dim mismatch."""
    u = np.asarray(u, dtype=np.float64)
    v = np.asarray(v, dtype=np.float64)
    if u.shape != v.shape:
        raise ValueError(f"dimension mismatch: {u.shape} vs {v.shape}")
    nu = np.linalg.norm(u)
    nv = np.linalg.norm(v)
    if nu == 0.0 or nv == 0.0:
        raise ValueError("cosine is undefined for zero-norm vectors")
    return float(np.clip(u @ v / (nu * nv), -1.0, 1.0))


def target_unit(keyword: str) -> str:
    """Multi-word keywords are looked up in their joined-unit form."""
    return "_".join(keyword.split())


def average_target_embedding(table: EmbeddingTable, targets) -> np.ndarray:
    """Arithmetic mean of the in-vocabulary target vectors.

    Out-of-vocabulary targets are skipped with a warning; if none are in
    vocabulary an :class:`EmbeddingError` lists the misses.
    """
    present = []
    missing = []
    for keyword in targets.keywords:
        unit = target_unit(keyword)
        if unit in table:
            present.append(table.vector(unit))
        else:
            missing.append(keyword)
    if not present:
        raise EmbeddingError(
            "no target keyword is in the embedding vocabulary: " + ", ".join(missing)
        )
    if missing:
        logger.warning("skipping %d out-of-vocabulary target(s): %s", len(missing), ", ".join(missing))
    return np.mean(np.stack(present), axis=0)
