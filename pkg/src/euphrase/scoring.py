"""Mask-filling scorers.

A scorer assigns each candidate phrase a probability of filling the
mask slot of a masked sentence, normalized over the candidate pool so
that per-sentence scores always sum to one.  Two implementations are
provided:

* :class:`OfflineScorer` — a smoothed count model over the corpus
  itself.  For candidate ``c`` and sentence ``m`` it computes
  ``prod_w (count(c near w) + alpha) / (count(c) + alpha * V)`` over the
  context tokens ``w`` nearest the mask, entirely offline.
* :class:`RemoteScorer` — a client for an HTTP masked-span model
  service speaking the JSON protocol below; responses are re-normalized
  locally so the pool-sum invariant holds regardless of server scaling.

Wire protocol (JSON over HTTP):
  POST ``/score``   request ``{"sentences": [{"left": [...], "right": [...]}],
  "candidates": ["black tar", ...]}`` (candidates space-separated);
  response ``{"scores": [[...], ...]}``, one row per sentence, one
  column per candidate, raw non-negative reals.
  GET ``/health``   200 with ``{"model": "<identifier>"}``.
"""

from __future__ import annotations

import logging
import math
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Protocol, Sequence

import numpy as np
import requests

from .contexts import MaskedSentence
from .errors import ScorerConstructionError, ScorerProtocolError, ScorerTransportError
from .phrases import PHRASE_JOINER, SegmentedCorpus

logger = logging.getLogger(__name__)

NORMALIZATION_TOLERANCE = 1e-6


class Scorer(Protocol):
    def score_batch(self, candidates: Sequence[str], sentence: MaskedSentence) -> np.ndarray: ...

    def score_matrix(self, candidates: Sequence[str], sentences: Sequence[MaskedSentence]) -> np.ndarray: ...


@dataclass
class ScoreMatrix:
    """Normalized candidate-by-sentence score matrix (columns sum to 1)."""

    candidates: list[str]
    sentences: list[MaskedSentence]
    scores: np.ndarray  # shape (n_candidates, n_sentences)


def build_score_matrix(
    scorer: Scorer,
    candidates: Sequence[str],
    sentences: Sequence[MaskedSentence],
) -> ScoreMatrix:
    if not candidates:
        raise ValueError("candidate list must be non-empty")
    if not sentences:
        raise ValueError("sentence list must be non-empty")
    matrix = scorer.score_matrix(candidates, sentences)
    return ScoreMatrix(candidates=list(candidates), sentences=list(sentences), scores=matrix)


def _normalize_rows_to_columns(raw: np.ndarray) -> np.ndarray:
    """Rows = sentences in; columns = sentences out, normalized per sentence.

    All-zero rows fall back to a uniform distribution so the invariant
    holds for every input.
    """
    raw = np.asarray(raw, dtype=np.float64)
    sums = raw.sum(axis=1, keepdims=True)
    uniform = np.full_like(raw, 1.0 / raw.shape[1])
    with np.errstate(invalid="ignore", divide="ignore"):
        normalized = np.where(sums > 0, raw / np.where(sums == 0, 1.0, sums), uniform)
    return normalized.T


@dataclass(frozen=True)
class OfflineScorerConfig:
    window: int = 3
    alpha: float = 0.1


class OfflineScorer:
    """Count-based context model built once from the segmented corpus."""

    def __init__(self, corpus: SegmentedCorpus, config: OfflineScorerConfig = OfflineScorerConfig()):
        if corpus.total_tokens == 0:
            raise ValueError("cannot build an offline scorer from an empty corpus")
        if config.alpha <= 0:
            raise ValueError("alpha must be positive")
        self.config = config
        self.unit_counts: Counter = Counter(corpus.vocab)
        self.vocab_size = len(corpus.vocab)
        cooc: dict[str, Counter] = {}
        window = config.window
        for _, _, sentence in corpus.sentences():
            n = len(sentence)
            for i in range(n):
                a = sentence[i]
                for j in range(i + 1, min(i + window + 1, n)):
                    b = sentence[j]
                    cooc.setdefault(a, Counter())[b] += 1
                    cooc.setdefault(b, Counter())[a] += 1
        self.cooc = cooc

    def _context_window(self, sentence: MaskedSentence) -> set[str]:
        window = self.config.window
        return set(sentence.left[-window:]) | set(sentence.right[:window])

    def _log_raw(self, candidates: Sequence[str], sentence: MaskedSentence) -> np.ndarray:
        alpha = self.config.alpha
        denom_base = alpha * self.vocab_size
        context = self._context_window(sentence)
        out = np.zeros(len(candidates), dtype=np.float64)
        for ci, cand in enumerate(candidates):
            near = self.cooc.get(cand, ())
            denom = math.log(self.unit_counts.get(cand, 0) + denom_base)
            total = 0.0
            for tok in context:
                count = near[tok] if near else 0
                total += math.log(count + alpha) - denom
            out[ci] = total
        return out

    def score_batch(self, candidates: Sequence[str], sentence: MaskedSentence) -> np.ndarray:
        if not candidates:
            raise ValueError("candidate list must be non-empty")
        log_raw = self._log_raw(candidates, sentence)
        shifted = np.exp(log_raw - log_raw.max())
        return shifted / shifted.sum()

    def score_matrix(self, candidates: Sequence[str], sentences: Sequence[MaskedSentence]) -> np.ndarray:
        out = np.empty((len(candidates), len(sentences)), dtype=np.float64)
        for mi, sentence in enumerate(sentences):
            out[:, mi] = self.score_batch(candidates, sentence)
        return out


def build_offline_scorer(
    corpus: SegmentedCorpus, config: OfflineScorerConfig = OfflineScorerConfig()
) -> OfflineScorer:
    return OfflineScorer(corpus, config)


def candidate_wire_form(unit: str) -> str:
    return unit.replace(PHRASE_JOINER, " ")


@dataclass(frozen=True)
class RemoteScorerConfig:
    endpoint: str
    timeout: float = 30.0
    batch_size: int = 32
    retries: int = 3
    parallel_requests: int = 4


class RemoteScorer:
    """Client for a masked-span scoring service.

    The endpoint must answer the health check at construction time;
    per-batch transport failures, malformed responses and shape
    mismatches are reported as distinct error types, with a configurable
    number of attempts before the run aborts.
    """

    def __init__(self, config: RemoteScorerConfig, session: requests.Session | None = None):
        self.config = config
        self.session = session or requests.Session()
        url = config.endpoint.rstrip("/") + "/health"
        try:
            resp = self.session.get(url, timeout=config.timeout)
        except requests.RequestException as exc:
            raise ScorerConstructionError(f"scorer health check failed: {url}: {exc}") from exc
        if resp.status_code != 200:
            raise ScorerConstructionError(
                f"scorer health check failed: {url} returned HTTP {resp.status_code}"
            )
        try:
            self.model = resp.json().get("model", "unknown")
        except ValueError as exc:
            raise ScorerConstructionError(f"scorer health check returned invalid JSON: {exc}") from exc
        logger.info("remote scorer ready at %s (model=%s)", config.endpoint, self.model)

    def _post_batch(self, candidates: Sequence[str], sentences: Sequence[MaskedSentence]) -> np.ndarray:
        payload = {
            "sentences": [{"left": list(s.left), "right": list(s.right)} for s in sentences],
            "candidates": [candidate_wire_form(c) for c in candidates],
        }
        url = self.config.endpoint.rstrip("/") + "/score"
        last_error: Exception | None = None
        for attempt in range(1, self.config.retries + 1):
            try:
                resp = self.session.post(url, json=payload, timeout=self.config.timeout)
            except requests.RequestException as exc:
                last_error = ScorerTransportError(
                    f"score request failed (attempt {attempt}/{self.config.retries}): {exc}"
                )
                continue
            if resp.status_code != 200:
                last_error = ScorerTransportError(
                    f"score request returned HTTP {resp.status_code} "
                    f"(attempt {attempt}/{self.config.retries})"
                )
                continue
            return self._parse_scores(resp, len(sentences), len(candidates))
        assert last_error is not None
        raise last_error

    @staticmethod
    def _parse_scores(resp, n_sentences: int, n_candidates: int) -> np.ndarray:
        try:
            body = resp.json()
        except ValueError as exc:
            raise ScorerProtocolError(f"response is not valid JSON: {exc}") from exc
        if not isinstance(body, dict) or "scores" not in body:
            raise ScorerProtocolError("response is missing the 'scores' field")
        rows = body["scores"]
        if not isinstance(rows, list) or len(rows) != n_sentences:
            got = len(rows) if isinstance(rows, list) else type(rows).__name__
            raise ScorerProtocolError(f"expected {n_sentences} score rows, received {got}")
        for i, row in enumerate(rows):
            if not isinstance(row, list) or len(row) != n_candidates:
                got = len(row) if isinstance(row, list) else type(row).__name__
                raise ScorerProtocolError(
                    f"row {i}: expected {n_candidates} candidate scores, received {got}"
                )
        raw = np.asarray(rows, dtype=np.float64)
        if not np.all(np.isfinite(raw)) or np.any(raw < 0):
            raise ScorerProtocolError("scores must be finite and non-negative")
        return raw

    def score_batch(self, candidates: Sequence[str], sentence: MaskedSentence) -> np.ndarray:
        if not candidates:
            raise ValueError("candidate list must be non-empty")
        raw = self._post_batch(candidates, [sentence])
        return _normalize_rows_to_columns(raw)[:, 0]

    def score_matrix(self, candidates: Sequence[str], sentences: Sequence[MaskedSentence]) -> np.ndarray:
        batch_size = self.config.batch_size
        batches = [sentences[i : i + batch_size] for i in range(0, len(sentences), batch_size)]
        if self.config.parallel_requests > 1 and len(batches) > 1:
            with ThreadPoolExecutor(max_workers=self.config.parallel_requests) as pool:
                raws = list(pool.map(lambda b: self._post_batch(candidates, b), batches))
        else:
            raws = [self._post_batch(candidates, batch) for batch in batches]
        return np.concatenate([_normalize_rows_to_columns(raw) for raw in raws], axis=1)
