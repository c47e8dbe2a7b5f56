"""Masked-sentence extraction around target-keyword occurrences.

Every occurrence of a target keyword (multi-word targets in their
joined-unit form) yields one masked sentence; an informativeness filter
then drops near-empty contexts and duplicates, since they carry no
ranking signal.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass
from pathlib import Path

from .phrases import SegmentedCorpus, join_sequences, load_stopwords
from .preselect import TargetKeywordSet

logger = logging.getLogger(__name__)

DEFAULT_MAX_CONTEXT = 15


@dataclass(frozen=True)
class MaskedSentence:
    """One target occurrence with its surrounding tokens.

    ``left + [target] + right`` reproduces the source sentence (with
    target phrases joined) whenever the sentence fits within the context
    cap; longer sentences keep the tokens nearest the mask.
    """

    left: tuple[str, ...]
    right: tuple[str, ...]
    target: str
    doc_id: int
    sent_idx: int


def extract_masked_sentences(
    corpus: SegmentedCorpus,
    targets: TargetKeywordSet,
    max_context: int | None = DEFAULT_MAX_CONTEXT,
) -> list[MaskedSentence]:
    """One :class:`MaskedSentence` per target occurrence, in corpus order.

    Multi-word targets are joined into single units before matching, so
    they are found even when the miner did not accept them as phrases.
    """
    unit_set = targets.units()
    multiword = {tuple(k.split()) for k in targets.keywords if " " in k}
    max_len = max((len(t) for t in multiword), default=2)
    out = []
    for doc_id, sent_idx, sentence in corpus.sentences():
        joined = join_sequences(sentence, multiword, max_len) if multiword else sentence
        for pos, tok in enumerate(joined):
            if tok not in unit_set:
                continue
            left = joined[:pos]
            right = joined[pos + 1 :]
            if max_context is not None:
                left = left[-max_context:] if max_context else []
                right = right[:max_context]
            out.append(
                MaskedSentence(
                    left=tuple(left),
                    right=tuple(right),
                    target=tok,
                    doc_id=doc_id,
                    sent_idx=sent_idx,
                )
            )
    if not out:
        logger.warning("no target keyword occurrences found in the corpus")
    return out


@dataclass(frozen=True)
class ContextFilterConfig:
    min_context_tokens: int = 5
    min_content: int = 2
    stopwords: frozenset[str] | None = None

    def stopword_set(self) -> frozenset[str]:
        return self.stopwords if self.stopwords is not None else load_stopwords()


def filter_informative(
    sentences: list[MaskedSentence],
    config: ContextFilterConfig = ContextFilterConfig(),
) -> list[MaskedSentence]:
    """Keep informative contexts only.

    A sentence survives iff its context has at least
    ``min_context_tokens`` tokens and at least ``min_content`` of them
    are non-stopwords.  Identical (left, right) pairs are de-duplicated,
    keeping the first.  The result is an order-preserving subsequence of
    the input, and the function is idempotent.
    """
    stopwords = config.stopword_set()
    kept = []
    seen: set[tuple[tuple[str, ...], tuple[str, ...]]] = set()
    for sent in sentences:
        context = sent.left + sent.right
        if len(context) < config.min_context_tokens:
            continue
        content = sum(1 for tok in context if tok not in stopwords)
        if content < config.min_content:
            continue
        key = (sent.left, sent.right)
        if key in seen:
            continue
        seen.add(key)
        kept.append(sent)
    logger.info("kept %d of %d masked sentences after filtering", len(kept), len(sentences))
    return kept


def write_masked_jsonl(path: str | Path, sentences: list[MaskedSentence]) -> None:
    """Masked-sentence dump; the mask slot is implicit between left and right."""
    with Path(path).open("w", encoding="utf-8") as fh:
        for sent in sentences:
            fh.write(
                json.dumps(
                    {
                        "left": list(sent.left),
                        "right": list(sent.right),
                        "target": sent.target,
                        "doc_id": sent.doc_id,
                        "sent_idx": sent.sent_idx,
                    },
                    sort_keys=True,
                )
                + "\n"
            )


def read_masked_jsonl(path: str | Path) -> list[MaskedSentence]:
    out = []
    with Path(path).open(encoding="utf-8") as fh:
        for line in fh:
            rec = json.loads(line)
            out.append(
                MaskedSentence(
                    left=tuple(rec["left"]),
                    right=tuple(rec["right"]),
                    target=rec["target"],
                    doc_id=rec["doc_id"],
                    sent_idx=rec["sent_idx"],
                )
            )
    return out
